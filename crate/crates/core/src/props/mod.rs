//! Monotone losing properties, their incremental trackers, extremal numbers
//! and explicit extremal witnesses.

mod planarity;
mod union_find;

use std::fmt;

pub use planarity::is_planar;
pub use union_find::{ComponentTracker, ParityUnion, ParityUnionFind};

use crate::error::{Error, Result};
use crate::game::{all_edges, edge_count, Edge};

/// A monotone increasing graph property; Avoider loses once his graph has it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LosingProperty {
    NonPlanar,
    NonBipartite,
    ConnectedSpanning,
    MinDegreeOne,
}

impl LosingProperty {
    pub const ALL: [LosingProperty; 4] = [
        LosingProperty::NonPlanar,
        LosingProperty::NonBipartite,
        LosingProperty::ConnectedSpanning,
        LosingProperty::MinDegreeOne,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LosingProperty::NonPlanar => "non_planar",
            LosingProperty::NonBipartite => "non_bipartite",
            LosingProperty::ConnectedSpanning => "connected_spanning",
            LosingProperty::MinDegreeOne => "min_degree_one",
        }
    }

    pub fn from_id(s: &str) -> Option<LosingProperty> {
        LosingProperty::ALL.into_iter().find(|p| p.id() == s)
    }

    /// From-scratch evaluation on the graph `([n], edges)`.
    pub fn check(self, n: usize, edges: &[Edge]) -> bool {
        match self {
            LosingProperty::NonPlanar => !is_planar(n, edges),
            LosingProperty::NonBipartite => !is_bipartite(n, edges),
            LosingProperty::ConnectedSpanning => is_connected_spanning(n, edges),
            LosingProperty::MinDegreeOne => has_min_degree_one(n, edges),
        }
    }

    /// Largest number of edges of a graph on `n` vertices without the property.
    pub fn extremal_number(self, n: usize) -> usize {
        match self {
            LosingProperty::NonPlanar if n < 3 => edge_count(n),
            LosingProperty::NonPlanar => 3 * n - 6,
            LosingProperty::NonBipartite => n * n / 4,
            LosingProperty::ConnectedSpanning | LosingProperty::MinDegreeOne => {
                edge_count(n.saturating_sub(1))
            }
        }
    }

    /// A concrete graph on `n` vertices of size [`Self::extremal_number`]
    /// that lacks the property, in canonical edge order.
    pub fn extremal_set(self, n: usize) -> Vec<Edge> {
        let mut out = match self {
            LosingProperty::NonPlanar if n < 3 => all_edges(n),
            LosingProperty::NonPlanar => {
                // K_2 joined to a path on the remaining vertices
                let mut out = vec![Edge::new(0, 1)];
                for v in 2..n {
                    out.push(Edge::new(0, v));
                    out.push(Edge::new(1, v));
                }
                for v in 2..n.saturating_sub(1) {
                    out.push(Edge::new(v, v + 1));
                }
                out
            }
            LosingProperty::NonBipartite => {
                let half = n / 2;
                let mut out = Vec::with_capacity(half * (n - half));
                for x in 0..half {
                    for y in half..n {
                        out.push(Edge::new(x, y));
                    }
                }
                out
            }
            LosingProperty::ConnectedSpanning | LosingProperty::MinDegreeOne => {
                all_edges(n.saturating_sub(1))
            }
        };
        out.sort_unstable();
        out
    }

    pub fn tracker(self, n: usize) -> PropertyTracker {
        let kind = match self {
            LosingProperty::NonPlanar => TrackerKind::Planarity { edges: Vec::new() },
            LosingProperty::NonBipartite => TrackerKind::Bipartite(ParityUnionFind::new(n)),
            LosingProperty::ConnectedSpanning => {
                TrackerKind::Components(ComponentTracker::new(n))
            }
            LosingProperty::MinDegreeOne => TrackerKind::Degrees {
                degree: vec![0; n],
                isolated: n,
            },
        };
        PropertyTracker {
            n,
            holds: false,
            kind,
        }
    }
}

impl fmt::Display for LosingProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug)]
enum TrackerKind {
    Planarity { edges: Vec<Edge> },
    Bipartite(ParityUnionFind),
    Components(ComponentTracker),
    Degrees { degree: Vec<usize>, isolated: usize },
}

/// Follows one growing graph and reports whether the property holds.
/// Once it holds it stays latched, which is sound because every property is
/// monotone increasing.
#[derive(Clone, Debug)]
pub struct PropertyTracker {
    n: usize,
    holds: bool,
    kind: TrackerKind,
}

impl PropertyTracker {
    pub fn holds(&self) -> bool {
        self.holds
    }

    pub fn add_edge(&mut self, e: Edge) -> bool {
        match &mut self.kind {
            TrackerKind::Planarity { edges } => {
                edges.push(e);
                if !self.holds {
                    self.holds = !is_planar(self.n, edges);
                }
            }
            TrackerKind::Bipartite(uf) => {
                uf.add_edge(e.u, e.v);
                self.holds = uf.has_odd_cycle();
            }
            TrackerKind::Components(ct) => {
                ct.add_edge(e.u, e.v);
                self.holds = ct.component_count() == 1;
            }
            TrackerKind::Degrees { degree, isolated } => {
                for x in [e.u, e.v] {
                    if degree[x] == 0 {
                        *isolated -= 1;
                    }
                    degree[x] += 1;
                }
                self.holds = *isolated == 0;
            }
        }
        self.holds
    }
}

pub fn is_bipartite(n: usize, edges: &[Edge]) -> bool {
    // BFS 2-colouring, independent of the union-find tracker
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            let cx = colour[x].expect("queued vertices are coloured");
            for &y in &adj[x] {
                match colour[y] {
                    None => {
                        colour[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

pub fn is_connected_spanning(n: usize, edges: &[Edge]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

pub fn has_min_degree_one(n: usize, edges: &[Edge]) -> bool {
    let mut touched = vec![false; n];
    for e in edges {
        touched[e.u] = true;
        touched[e.v] = true;
    }
    touched.into_iter().all(|t| t)
}

/// Largest subset of `E(K_n)` on which the property fails, by exhaustive
/// enumeration of all edge subsets.
pub fn brute_force_extremal(property: LosingProperty, n: usize) -> Result<usize> {
    let edges = all_edges(n);
    let m = edges.len();
    if m > 21 {
        return Err(Error::CapacityExceeded(format!(
            "exhaustive extremal search needs C(n,2) <= 21, got {m} for n={n}"
        )));
    }
    let mut best = 0;
    let mut subset = Vec::with_capacity(m);
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        subset.clear();
        subset.extend((0..m).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]));
        if !property.check(n, &subset) {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<Edge> {
        (0..n - 1).map(|v| Edge::new(v, v + 1)).collect()
    }

    fn cycle(n: usize) -> Vec<Edge> {
        let mut e = path(n);
        e.push(Edge::new(0, n - 1));
        e
    }

    #[test]
    fn property_ids_round_trip() {
        for p in LosingProperty::ALL {
            assert_eq!(LosingProperty::from_id(p.id()), Some(p));
        }
        assert_eq!(LosingProperty::from_id("planar"), None);
    }

    #[test]
    fn bipartite_examples() {
        assert!(is_bipartite(4, &cycle(4)));
        assert!(!is_bipartite(3, &cycle(3)));
        assert!(is_bipartite(7, &[]));
    }

    #[test]
    fn connectivity_and_min_degree_examples() {
        assert!(is_connected_spanning(5, &path(5)));
        assert!(has_min_degree_one(5, &path(5)));
        let matching = [Edge::new(0, 1), Edge::new(2, 3)];
        assert!(has_min_degree_one(4, &matching));
        assert!(!is_connected_spanning(4, &matching));
        let with_isolated = path(4);
        assert!(!is_connected_spanning(5, &with_isolated));
        assert!(!has_min_degree_one(5, &with_isolated));
    }

    #[test]
    fn extremal_numbers_at_ten() {
        assert_eq!(LosingProperty::NonPlanar.extremal_number(10), 24);
        assert_eq!(LosingProperty::NonBipartite.extremal_number(10), 25);
        assert_eq!(LosingProperty::MinDegreeOne.extremal_number(10), 36);
        assert_eq!(LosingProperty::ConnectedSpanning.extremal_number(10), 36);
        assert_eq!(LosingProperty::NonPlanar.extremal_number(2), 1);
    }

    #[test]
    fn extremal_set_examples() {
        let k22 = LosingProperty::NonBipartite.extremal_set(4);
        assert_eq!(
            k22,
            vec![Edge::new(0, 2), Edge::new(0, 3), Edge::new(1, 2), Edge::new(1, 3)]
        );
        assert!(is_bipartite(4, &k22));

        let k3 = LosingProperty::MinDegreeOne.extremal_set(4);
        assert_eq!(k3, vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);

        let tri = LosingProperty::NonPlanar.extremal_set(5);
        assert_eq!(tri.len(), 9);
        assert!(is_planar(5, &tri));
        // K_5 minus the edge between the path ends
        assert!(!tri.contains(&Edge::new(2, 4)));
    }

    #[test]
    fn extremal_sets_are_witnesses() {
        for n in 3..40 {
            for p in LosingProperty::ALL {
                let set = p.extremal_set(n);
                assert_eq!(set.len(), p.extremal_number(n), "{p} n={n}");
                assert!(!p.check(n, &set), "{p} n={n}");
            }
        }
    }

    #[test]
    fn extremal_sets_are_saturated_at_their_defect() {
        let n = 9;
        let set = LosingProperty::ConnectedSpanning.extremal_set(n);
        for v in 0..n - 1 {
            let mut grown = set.clone();
            grown.push(Edge::new(v, n - 1));
            assert!(LosingProperty::ConnectedSpanning.check(n, &grown));
            assert!(LosingProperty::MinDegreeOne.check(n, &grown));
        }
        let set = LosingProperty::NonBipartite.extremal_set(n);
        let half = n / 2;
        for side in [0..half, half..n] {
            for x in side.clone() {
                for y in side.clone().filter(|&y| y > x) {
                    let mut grown = set.clone();
                    grown.push(Edge::new(x, y));
                    assert!(LosingProperty::NonBipartite.check(n, &grown));
                }
            }
        }
        // a maximal planar graph: adding any missing edge breaks planarity
        let set = LosingProperty::NonPlanar.extremal_set(n);
        for e in all_edges(n).into_iter().filter(|e| !set.contains(e)) {
            let mut grown = set.clone();
            grown.push(e);
            assert!(LosingProperty::NonPlanar.check(n, &grown));
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_extremal(LosingProperty::NonBipartite, 5).unwrap(), 6);
        assert_eq!(brute_force_extremal(LosingProperty::NonPlanar, 5).unwrap(), 9);
        assert_eq!(brute_force_extremal(LosingProperty::ConnectedSpanning, 4).unwrap(), 3);
        assert!(matches!(
            brute_force_extremal(LosingProperty::MinDegreeOne, 8),
            Err(Error::CapacityExceeded(_))
        ));
    }

    #[test]
    fn brute_force_agrees_with_closed_forms() {
        for n in 2..=6 {
            for p in LosingProperty::ALL {
                assert_eq!(
                    brute_force_extremal(p, n).unwrap(),
                    p.extremal_number(n),
                    "{p} n={n}"
                );
            }
        }
    }

    #[test]
    fn trackers_latch() {
        let mut t = LosingProperty::NonBipartite.tracker(3);
        assert!(!t.add_edge(Edge::new(0, 1)));
        assert!(!t.add_edge(Edge::new(1, 2)));
        assert!(t.add_edge(Edge::new(0, 2)));
        assert!(t.holds());
    }
}
