//! Left-right planarity test (de Fraysseix–Rosenstiehl criterion, in the
//! formulation by Brandes). Only the yes/no answer is computed; no embedding
//! is built.

use crate::game::Edge;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn single(e: usize) -> Self {
        Interval {
            low: Some(e),
            high: Some(e),
        }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    adj: Vec<Vec<(usize, usize)>>,
    oriented: Vec<bool>,
    source: Vec<usize>,
    target: Vec<usize>,
    out: Vec<Vec<usize>>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<usize>,
    lowpt_edge: Vec<usize>,
    reference: Vec<Option<usize>>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

impl LrState {
    fn new(n: usize, edges: &[Edge]) -> Self {
        let m = edges.len();
        let mut adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        LrState {
            adj,
            oriented: vec![false; m],
            source: vec![NONE; m],
            target: vec![NONE; m],
            out: vec![Vec::new(); n],
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            lowpt: vec![0; m],
            lowpt2: vec![0; m],
            nesting: vec![0; m],
            lowpt_edge: vec![NONE; m],
            reference: vec![None; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
        }
    }

    fn conflicting(&self, interval: &Interval, b: usize) -> bool {
        match interval.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return p.right.low.map_or(NONE, |l| self.lowpt[l]);
        }
        if p.right.is_empty() {
            return p.left.low.map_or(NONE, |l| self.lowpt[l]);
        }
        let l = p.left.low.map_or(NONE, |l| self.lowpt[l]);
        let r = p.right.low.map_or(NONE, |r| self.lowpt[r]);
        l.min(r)
    }

    fn orient(&mut self, v: usize) {
        let parent = self.parent_edge[v];
        for i in 0..self.adj[v].len() {
            let (w, id) = self.adj[v][i];
            if self.oriented[id] {
                continue;
            }
            self.oriented[id] = true;
            self.source[id] = v;
            self.target[id] = w;
            self.out[v].push(id);
            self.lowpt[id] = self.height[v];
            self.lowpt2[id] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(id);
                self.height[w] = self.height[v] + 1;
                self.orient(w);
            } else {
                self.lowpt[id] = self.height[w];
            }

            self.nesting[id] = 2 * self.lowpt[id];
            if self.lowpt2[id] < self.height[v] {
                self.nesting[id] += 1;
            }

            if let Some(e) = parent {
                if self.lowpt[id] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[id]);
                    self.lowpt[e] = self.lowpt[id];
                } else if self.lowpt[id] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[id]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[id]);
                }
            }
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let parent = self.parent_edge[v];
        for i in 0..self.out[v].len() {
            let ei = self.out[v][i];
            let w = self.target[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval::single(ei),
                });
            }

            if self.lowpt[ei] < self.height[v] {
                // a root has height 0, so a return edge implies a parent edge
                let e = parent.expect("return edge below a root");
                if i == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = parent {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        while let Some(mut q) = self.stack.pop() {
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("non-empty right interval");
            if self.lowpt[q_low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(l) = p.right.low {
                    self.reference[l] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[q_low] = Some(self.lowpt_edge[e]);
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }

        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("checked non-empty");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(l) = p.right.low {
                self.reference[l] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(l) = p.left.low {
                self.reference[l] = q.left.high;
            }
            p.left.low = q.left.low;
        }

        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.source[e];
        let hu = self.height[u];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            self.stack.pop();
        }

        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.target[h] != u {
                    break;
                }
                p.left.high = self.reference[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.reference[l] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.target[h] != u {
                    break;
                }
                p.right.high = self.reference[h];
            }
            if p.right.high.is_none() {
                if let Some(l) = p.right.low {
                    self.reference[l] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }

        if self.lowpt[e] < hu {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                let pick_left = match (hl, hr) {
                    (Some(l), Some(r)) => self.lowpt[l] > self.lowpt[r],
                    (Some(_), None) => true,
                    _ => false,
                };
                self.reference[e] = if pick_left { hl } else { hr };
            }
        }
    }
}

/// Whether the graph on vertices `0..n` with the given simple edge list is planar.
pub fn is_planar(n: usize, edges: &[Edge]) -> bool {
    let m = edges.len();
    if n > 2 && m > 3 * n - 6 {
        return false;
    }
    // K_{3,3} has 9 edges; anything smaller is planar
    if m < 9 {
        return true;
    }
    let mut st = LrState::new(n, edges);
    let mut roots = Vec::new();
    for v in 0..n {
        if st.height[v] == NONE {
            st.height[v] = 0;
            roots.push(v);
            st.orient(v);
        }
    }
    for v in 0..n {
        let mut out = std::mem::take(&mut st.out[v]);
        out.sort_by_key(|&id| st.nesting[id]);
        st.out[v] = out;
    }
    roots.into_iter().all(|r| st.test(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::all_edges;

    fn complete_bipartite(a: usize, b: usize) -> Vec<Edge> {
        let mut out = Vec::new();
        for x in 0..a {
            for y in a..a + b {
                out.push(Edge::new(x, y));
            }
        }
        out
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(is_planar(4, &all_edges(4)));
        assert!(!is_planar(5, &all_edges(5)));
        assert!(!is_planar(6, &complete_bipartite(3, 3)));
        let mut k5_minus = all_edges(5);
        k5_minus.pop();
        assert!(is_planar(5, &k5_minus));
        let mut k33_minus = complete_bipartite(3, 3);
        k33_minus.remove(4);
        assert!(is_planar(6, &k33_minus));
    }

    #[test]
    fn subdivided_k33_is_not_planar() {
        // K_{3,3} with each edge split by a fresh vertex
        let mut edges = Vec::new();
        let mut next = 6;
        for e in complete_bipartite(3, 3) {
            edges.push(Edge::new(e.u, next));
            edges.push(Edge::new(next, e.v));
            next += 1;
        }
        assert!(!is_planar(next, &edges));
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push(Edge::new(i, (i + 1) % 5));
            edges.push(Edge::new(i, i + 5));
            edges.push(Edge::new(5 + i, 5 + (i + 2) % 5));
        }
        assert!(!is_planar(10, &edges));
    }

    #[test]
    fn grid_and_wheel_are_planar() {
        let side = 12;
        let mut edges = Vec::new();
        for r in 0..side {
            for c in 0..side {
                let v = r * side + c;
                if c + 1 < side {
                    edges.push(Edge::new(v, v + 1));
                }
                if r + 1 < side {
                    edges.push(Edge::new(v, v + side));
                }
                // one diagonal per cell keeps it a triangulated grid
                if c + 1 < side && r + 1 < side {
                    edges.push(Edge::new(v, v + side + 1));
                }
            }
        }
        assert!(is_planar(side * side, &edges));

        let n = 30;
        let mut wheel: Vec<Edge> = (1..n).map(|v| Edge::new(0, v)).collect();
        wheel.extend((1..n).map(|v| Edge::new(v, if v + 1 == n { 1 } else { v + 1 })));
        assert!(is_planar(n, &wheel));
    }

    #[test]
    fn disconnected_nonplanar_component() {
        let mut edges: Vec<Edge> = all_edges(5);
        // a large planar cycle elsewhere
        for v in 5..40 {
            edges.push(Edge::new(v, if v + 1 == 40 { 5 } else { v + 1 }));
        }
        assert!(!is_planar(40, &edges));
    }
}
