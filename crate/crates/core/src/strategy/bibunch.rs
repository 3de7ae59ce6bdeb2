use std::collections::BTreeSet;

use crate::game::{AuditLevel, Edge, GameState, Player, Strategy};

/// A bi-bunch `(V1, V2)`, both sides sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiBunch {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Avoider for the non-bipartite game. Keeps a partition of the touched
/// vertices into bi-bunches (proto-bipartitions) and claims, in order of
/// preference: an edge across a bunch, an edge between two untouched
/// vertices, an edge between two bunches.
///
/// For odd `n` the last vertex is held back from padding and pairing and
/// plays the part of the final untouched vertex.
#[derive(Clone, Debug)]
pub struct BiBunchAvoider {
    n: usize,
    designated: Option<usize>,
    place: Vec<Option<(usize, bool)>>,
    sides: Vec<[Vec<usize>; 2]>,
    cross_open: Vec<usize>,
    // unclaimed edges across a bunch, by edge index
    cross: BTreeSet<usize>,
    untouched: BTreeSet<usize>,
    last_untouched: Option<usize>,
    degenerate: usize,
    enforcer_same_side: usize,
    forced_round: Option<usize>,
    moves_by_priority: [usize; 5],
    violations: Vec<String>,
}

impl BiBunchAvoider {
    pub fn new() -> Self {
        BiBunchAvoider {
            n: 0,
            designated: None,
            place: Vec::new(),
            sides: Vec::new(),
            cross_open: Vec::new(),
            cross: BTreeSet::new(),
            untouched: BTreeSet::new(),
            last_untouched: None,
            degenerate: 0,
            enforcer_same_side: 0,
            forced_round: None,
            moves_by_priority: [0; 5],
            violations: Vec::new(),
        }
    }

    /// Live bunches, ordered by their least vertex.
    pub fn bunches(&self) -> Vec<BiBunch> {
        let mut out: Vec<BiBunch> = self
            .sides
            .iter()
            .filter(|s| !s[0].is_empty() || !s[1].is_empty())
            .map(|s| {
                let mut left = s[0].clone();
                let mut right = s[1].clone();
                left.sort_unstable();
                right.sort_unstable();
                BiBunch { left, right }
            })
            .collect();
        out.sort_by_key(|b| b.left.iter().chain(&b.right).min().copied());
        out
    }

    /// Untouched vertices, including a still-untouched designated vertex.
    pub fn untouched_count(&self) -> usize {
        self.untouched.len() + usize::from(self.designated_untouched())
    }

    pub fn unclaimed_cross_edges(&self) -> usize {
        self.cross.len()
    }

    /// Enforcer edges that landed inside one side of a bunch.
    pub fn enforcer_same_side(&self) -> usize {
        self.enforcer_same_side
    }

    fn designated_untouched(&self) -> bool {
        self.designated.is_some_and(|d| self.place[d].is_none())
    }

    fn is_untouched(&self, v: usize) -> bool {
        self.place[v].is_none()
    }

    fn put(&mut self, state: &GameState, v: usize, bunch: usize, side: bool) {
        debug_assert!(self.place[v].is_none());
        let mut added = 0;
        for &w in &self.sides[bunch][usize::from(!side)] {
            if state.is_open(v, w) {
                self.cross.insert(state.index_of(Edge::new(v, w)));
                added += 1;
            }
        }
        self.cross_open[bunch] += added;
        self.sides[bunch][usize::from(side)].push(v);
        self.place[v] = Some((bunch, side));
        self.untouched.remove(&v);
    }

    fn new_bunch(&mut self, state: &GameState, left: &[usize], right: &[usize]) {
        let id = self.sides.len();
        self.sides.push([Vec::new(), Vec::new()]);
        self.cross_open.push(0);
        for &v in left {
            self.put(state, v, id, false);
        }
        for &v in right {
            self.put(state, v, id, true);
        }
    }

    /// Merges two bunches; side `t` of `b` lands on side `t ^ flip` of `a`.
    fn merge(&mut self, state: &GameState, a: usize, b: usize, flip: bool) {
        let (keep, moved) = if self.sides[a][0].len() + self.sides[a][1].len()
            >= self.sides[b][0].len() + self.sides[b][1].len()
        {
            (a, b)
        } else {
            (b, a)
        };
        let moved_sides = std::mem::take(&mut self.sides[moved]);
        let mut added = self.cross_open[moved];
        self.cross_open[moved] = 0;
        for (t, members) in moved_sides.iter().enumerate() {
            let new_side = (t == 1) ^ flip;
            for &z in members {
                for &w in &self.sides[keep][usize::from(!new_side)] {
                    if state.is_open(z, w) {
                        self.cross.insert(state.index_of(Edge::new(z, w)));
                        added += 1;
                    }
                }
            }
        }
        for (t, members) in moved_sides.into_iter().enumerate() {
            let new_side = (t == 1) ^ flip;
            for &z in &members {
                self.place[z] = Some((keep, new_side));
            }
            self.sides[keep][usize::from(new_side)].extend(members);
        }
        self.cross_open[keep] += added;
    }

    fn padding(&self, exclude: &[usize], count: usize) -> Vec<usize> {
        self.untouched
            .iter()
            .copied()
            .filter(|v| !exclude.contains(v))
            .take(count)
            .collect()
    }

    fn in_bunch(&self, v: usize) -> bool {
        self.place[v].is_some()
    }

    fn observe_avoider(&mut self, state: &GameState, x: usize, y: usize) {
        match (self.place[x], self.place[y]) {
            (Some((a, sa)), Some((b, sb))) => {
                if a != b {
                    self.merge(state, a, b, sa == sb);
                } else if sa == sb && self.forced_round.is_none() {
                    self.violations
                        .push(format!("Avoider claimed ({x},{y}) inside one side of a bunch"));
                }
            }
            (Some((a, sa)), None) => self.put(state, y, a, !sa),
            (None, Some((b, sb))) => self.put(state, x, b, !sb),
            (None, None) => self.new_bunch(state, &[x], &[y]),
        }
    }

    fn observe_enforcer(&mut self, state: &GameState, x: usize, y: usize) {
        let d = self.designated;
        match (self.place[x], self.place[y]) {
            (Some((a, sa)), Some((b, sb))) => {
                if a != b {
                    self.merge(state, a, b, sa != sb);
                }
            }
            (Some((a, sa)), None) | (None, Some((a, sa))) => {
                let z = if self.in_bunch(x) { y } else { x };
                self.put(state, z, a, sa);
                if Some(z) != d {
                    match self.padding(&[z], 1).first() {
                        Some(&u) => self.put(state, u, a, !sa),
                        None if self.n.is_multiple_of(2) => self
                            .violations
                            .push(format!("no untouched vertex to pad bunch after ({x},{y})")),
                        None => {}
                    }
                }
            }
            (None, None) => {
                let has_designated = d == Some(x) || d == Some(y);
                let want = if has_designated { 1 } else { 2 };
                let pad = self.padding(&[x, y], want);
                if pad.len() == want {
                    self.new_bunch(state, &[x, y], &pad);
                } else {
                    self.degenerate += 1;
                    if self.degenerate > 1 && self.n.is_multiple_of(2) {
                        self.violations.push("second degenerate bunch".into());
                    }
                    self.new_bunch(state, &[x], &[y]);
                }
            }
        }
        if let (Some(a), Some(b)) = (self.place[x], self.place[y]) {
            if a == b {
                self.enforcer_same_side += 1;
            }
        }
    }

    fn full_audit(&self, state: &GameState) -> Vec<String> {
        let mut out = Vec::new();
        for (id, s) in self.sides.iter().enumerate() {
            for (t, members) in s.iter().enumerate() {
                for &v in members {
                    if self.place[v] != Some((id, t == 1)) {
                        out.push(format!("vertex {v} listed in bunch {id} but placed elsewhere"));
                    }
                }
            }
            if self.n.is_multiple_of(2) && s[0].len() != s[1].len() {
                out.push(format!("bunch {id} has sides {} and {}", s[0].len(), s[1].len()));
            }
        }
        for v in 0..self.n {
            let has_edge = state.degree(Player::Avoider, v) + state.degree(Player::Enforcer, v) > 0;
            if has_edge && !self.in_bunch(v) {
                out.push(format!("vertex {v} has a claimed edge but is in no bunch"));
            }
            let listed = self.untouched.contains(&v) || (Some(v) == self.designated && !self.in_bunch(v));
            if listed == self.in_bunch(v) {
                out.push(format!("vertex {v}: untouched list disagrees with bunch membership"));
            }
        }
        let checked = match self.forced_round {
            Some(r) => r.saturating_sub(1),
            None => state.avoider_edges().len(),
        };
        for &e in &state.avoider_edges()[..checked.min(state.avoider_edges().len())] {
            if self.place[e.u].is_some() && self.place[e.u] == self.place[e.v] {
                out.push(format!("Avoider edge {e} lies inside one side of a bunch"));
            }
        }
        for e in state.unclaimed() {
            let across = matches!(
                (self.place[e.u], self.place[e.v]),
                (Some((a, sa)), Some((b, sb))) if a == b && sa != sb
            );
            if across != self.cross.contains(&state.index_of(e)) {
                out.push(format!("cross-edge set out of date at {e}"));
            }
        }
        out
    }
}

impl Default for BiBunchAvoider {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for BiBunchAvoider {
    fn name(&self) -> String {
        "bibunch_avoider".into()
    }

    fn start(&mut self, n: usize, _side: Player, _seed: u64) {
        *self = BiBunchAvoider::new();
        self.n = n;
        self.designated = (n % 2 == 1).then(|| n - 1);
        self.place = vec![None; n];
        self.untouched = (0..n).filter(|&v| Some(v) != self.designated).collect();
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        let now = self.untouched_count();
        if let Some(before) = self.last_untouched {
            if before > now + 6 {
                self.violations
                    .push(format!("untouched count fell from {before} to {now} in one round"));
            }
        }
        self.last_untouched = Some(now);

        if let Some(&i) = self.cross.first() {
            self.moves_by_priority[0] += 1;
            return state.edge_at(i);
        }
        let mut it = self.untouched.iter();
        if let (Some(&a), Some(&b)) = (it.next(), it.next()) {
            self.moves_by_priority[1] += 1;
            return Edge::new(a, b);
        }
        let place = &self.place;
        let between = state.first_unclaimed_where(|e| match (place[e.u], place[e.v]) {
            (Some((a, _)), Some((b, _))) => a != b,
            _ => false,
        });
        if let Some(e) = between {
            self.moves_by_priority[2] += 1;
            return e;
        }
        let to_bunch =
            state.first_unclaimed_where(|e| place[e.u].is_some() != place[e.v].is_some());
        let to_bunch = to_bunch.or_else(|| state.first_unclaimed_where(|e| self.is_untouched(e.u) && self.is_untouched(e.v)));
        if let Some(e) = to_bunch {
            self.moves_by_priority[3] += 1;
            return e;
        }
        // every open edge lies inside one side of a bunch
        self.moves_by_priority[4] += 1;
        if self.forced_round.is_none() {
            self.forced_round = Some(state.round() + 1);
        }
        state.first_unclaimed().expect("choose called on a finished board")
    }

    fn observe(&mut self, state: &GameState, mover: Player, e: Edge) {
        let idx = state.index_of(e);
        if self.cross.remove(&idx) {
            if let Some((b, _)) = self.place[e.u] {
                self.cross_open[b] -= 1;
            }
        }
        match mover {
            Player::Avoider => self.observe_avoider(state, e.u, e.v),
            Player::Enforcer => self.observe_enforcer(state, e.u, e.v),
        }
    }

    fn audit(&mut self, state: &GameState, level: AuditLevel) -> Vec<String> {
        let mut out = std::mem::take(&mut self.violations);
        if level == AuditLevel::Full {
            out.extend(self.full_audit(state));
        }
        out
    }

    fn stats(&self) -> Vec<(String, String)> {
        let [a, b, c, d, f] = self.moves_by_priority;
        vec![
            ("cross_moves".into(), a.to_string()),
            ("untouched_pair_moves".into(), b.to_string()),
            ("bunch_merge_moves".into(), c.to_string()),
            ("other_moves".into(), d.to_string()),
            ("forced_moves".into(), f.to_string()),
            ("degenerate_bunches".into(), self.degenerate.to_string()),
            ("enforcer_same_side".into(), self.enforcer_same_side.to_string()),
        ]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
