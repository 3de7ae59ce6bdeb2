use std::collections::BTreeSet;

use crate::game::{AuditLevel, Edge, GameState, Player, Strategy};

pub const DEFAULT_EPSILON: f64 = 0.1;

/// Which rule picked the vertex joined to `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinCase {
    Low,
    FlatGood,
    FlatPair,
    SteepGood,
    SteepPair,
    FollowUp,
    Fallback,
}

impl JoinCase {
    pub fn id(self) -> &'static str {
        match self {
            JoinCase::Low => "case1",
            JoinCase::FlatGood => "case2a",
            JoinCase::FlatPair => "case2b",
            JoinCase::SteepGood => "case3a",
            JoinCase::SteepPair => "case3b",
            JoinCase::FollowUp => "follow_up",
            JoinCase::Fallback => "fallback",
        }
    }

    const ALL: [JoinCase; 7] = [
        JoinCase::Low,
        JoinCase::FlatGood,
        JoinCase::FlatPair,
        JoinCase::SteepGood,
        JoinCase::SteepPair,
        JoinCase::FollowUp,
        JoinCase::Fallback,
    ];
}

#[derive(Clone, Copy, Debug)]
struct Decision {
    sum: u64,
    outside: usize,
    component: usize,
    clean: bool,
}

/// Avoider for the min-degree game. Grows a single component `C`, keeps the
/// average Enforcer degree `d̄` outside `C` rising, and once some outside
/// vertex reaches Enforcer degree `l = (1 - 4ε)/2 · ln n` stops touching it.
#[derive(Clone, Debug)]
pub struct IsolatedVertexAvoider {
    eps: f64,
    n: usize,
    l: f64,
    in_c: Vec<bool>,
    component: Vec<usize>,
    // unclaimed edges with both ends in C, by edge index
    internal: BTreeSet<usize>,
    open_to_c: Vec<usize>,
    outside_sum: u64,
    sacrifice: Option<usize>,
    sacrifice_cursor: usize,
    follow_up: Option<usize>,
    last: Option<Decision>,
    case_counts: [usize; 7],
    cancelled_follow_ups: usize,
    growth_checks: usize,
    guarantee_violated: bool,
    violations: Vec<String>,
    growth_violations: Vec<String>,
}

impl IsolatedVertexAvoider {
    pub fn new(eps: f64) -> Self {
        IsolatedVertexAvoider {
            eps,
            n: 0,
            l: 0.0,
            in_c: Vec::new(),
            component: Vec::new(),
            internal: BTreeSet::new(),
            open_to_c: Vec::new(),
            outside_sum: 0,
            sacrifice: None,
            sacrifice_cursor: 0,
            follow_up: None,
            last: None,
            case_counts: [0; 7],
            cancelled_follow_ups: 0,
            growth_checks: 0,
            guarantee_violated: false,
            violations: Vec::new(),
            growth_violations: Vec::new(),
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// The degree threshold `l`.
    pub fn threshold(&self) -> f64 {
        self.l
    }

    pub fn sacrifice_vertex(&self) -> Option<usize> {
        self.sacrifice
    }

    pub fn component(&self) -> &[usize] {
        &self.component
    }

    pub fn case_count(&self, case: JoinCase) -> usize {
        self.case_counts[JoinCase::ALL.iter().position(|&c| c == case).expect("listed")]
    }

    /// Number of d̄-growth checks performed so far.
    pub fn growth_checks(&self) -> usize {
        self.growth_checks
    }

    pub fn guarantee_violated(&self) -> bool {
        self.guarantee_violated
    }

    /// Average Enforcer degree outside `C`.
    pub fn average_outside_degree(&self) -> f64 {
        let m = self.n - self.component.len();
        if m == 0 {
            0.0
        } else {
            self.outside_sum as f64 / m as f64
        }
    }

    /// A vertex outside `C` is good when it has an odd number of unclaimed edges to `C`.
    pub fn is_good(&self, v: usize) -> bool {
        !self.in_c[v] && self.open_to_c[v] % 2 == 1
    }

    fn count(&mut self, case: JoinCase) {
        let i = JoinCase::ALL.iter().position(|&c| c == case).expect("listed");
        self.case_counts[i] += 1;
    }

    fn join_edge(&self, state: &GameState, v: usize) -> Option<Edge> {
        let mut best = None;
        for &c in &self.component {
            if state.is_open(v, c) && best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
        best.map(|c| Edge::new(v, c))
    }

    fn sacrifice_move(&mut self, state: &GameState, v: usize) -> Edge {
        let m = state.num_edges();
        while self.sacrifice_cursor < m {
            let i = self.sacrifice_cursor;
            let e = state.edge_at(i);
            if state.owner_at(i).is_none() && !e.touches(v) {
                return e;
            }
            self.sacrifice_cursor += 1;
        }
        state.first_unclaimed().expect("choose called on a finished board")
    }

    fn outside(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| !self.in_c[v])
    }

    fn heaviest_outside(&self, state: &GameState) -> Option<usize> {
        self.outside()
            .max_by_key(|&v| (state.degree(Player::Enforcer, v), std::cmp::Reverse(v)))
    }

    fn check_growth(&mut self, now: Decision) {
        let Some(prev) = self.last else {
            return;
        };
        let grew = now.component.saturating_sub(prev.component);
        let regime = prev.component as f64 <= self.n as f64 - self.l / self.eps - 2.0;
        if !prev.clean || !(1..=2).contains(&grew) || !regime || prev.outside < 2 {
            return;
        }
        self.growth_checks += 1;
        let before = prev.sum as f64 / prev.outside as f64;
        let after = now.sum as f64 / now.outside as f64;
        let need = (1.0 - 2.0 * self.eps) / (prev.outside - 1) as f64;
        if after - before < need - 1e-9 {
            self.growth_violations.push(format!(
                "d̄ rose from {before:.4} to {after:.4} as |C| went {} -> {}, below the required {need:.4}",
                prev.component, now.component
            ));
        }
    }

    /// Picks the vertex to join when no internal edge is left.
    fn select_join(&mut self, state: &GameState) -> Result<(usize, JoinCase), ()> {
        let m = self.n - self.component.len();
        let sum = self.outside_sum;
        let deg = |v: usize| state.degree(Player::Enforcer, v) as u64;
        let joinable = |v: usize| self.open_to_c[v] > 0;

        let low: Vec<usize> = self
            .outside()
            .filter(|&v| (deg(v) + 1) * (m as u64) <= sum)
            .collect();
        if !low.is_empty() {
            return low
                .into_iter()
                .find(|&v| joinable(v))
                .map(|v| (v, JoinCase::Low))
                .ok_or(());
        }
        let floor = sum / m as u64;
        let frac = (sum - floor * m as u64) as f64;
        let steep = frac >= (1.0 - self.eps) * m as f64;
        let d: Vec<usize> = self
            .outside()
            .filter(|&v| deg(v) == floor || (steep && deg(v) == floor + 1))
            .collect();
        let (good_case, pair_case) = if steep {
            (JoinCase::SteepGood, JoinCase::SteepPair)
        } else {
            (JoinCase::FlatGood, JoinCase::FlatPair)
        };
        if let Some(&v) = d.iter().find(|&&v| self.is_good(v)) {
            return Ok((v, good_case));
        }
        for &u in d.iter().filter(|&&u| joinable(u)) {
            if let Some(&w) = d.iter().find(|&&w| w != u && state.is_open(u, w)) {
                self.follow_up = Some(w);
                return Ok((u, pair_case));
            }
        }
        Err(())
    }

    fn fallback_join(&mut self, state: &GameState) -> Option<usize> {
        self.outside()
            .filter(|&v| self.open_to_c[v] > 0)
            .min_by_key(|&v| (state.degree(Player::Enforcer, v), v))
    }

    fn set_sacrifice(&mut self, v: usize) {
        self.sacrifice = Some(v);
        self.follow_up = None;
        self.sacrifice_cursor = 0;
    }

    fn join(&mut self, state: &GameState, v: usize) {
        self.in_c[v] = true;
        self.outside_sum -= state.degree(Player::Enforcer, v) as u64;
        for &c in &self.component {
            if state.is_open(v, c) {
                self.internal.insert(state.index_of(Edge::new(v, c)));
            }
        }
        for z in 0..self.n {
            if !self.in_c[z] && state.is_open(z, v) {
                self.open_to_c[z] += 1;
            }
        }
        self.component.push(v);
    }

    fn full_audit(&self, state: &GameState) -> Vec<String> {
        let mut out = Vec::new();
        let scratch: u64 = self.outside().map(|v| state.degree(Player::Enforcer, v) as u64).sum();
        if scratch != self.outside_sum {
            out.push(format!("outside degree sum {} drifted from {scratch}", self.outside_sum));
        }
        for v in self.outside() {
            let open = self.component.iter().filter(|&&c| state.is_open(v, c)).count();
            if open != self.open_to_c[v] {
                out.push(format!("vertex {v}: {} open edges to C recorded, {open} actual", self.open_to_c[v]));
            }
        }
        if self.sacrifice.is_none() {
            let mut uf = crate::props::ComponentTracker::new(self.n);
            for e in state.avoider_edges() {
                uf.add_edge(e.u, e.v);
                if !(self.in_c[e.u] && self.in_c[e.v]) {
                    out.push(format!("Avoider edge {e} leaves C"));
                }
            }
            if let Some(&root) = self.component.first() {
                if uf.component_size(root) != self.component.len() {
                    out.push("C is not a single Avoider component".into());
                }
            }
        }
        out
    }
}

impl Strategy for IsolatedVertexAvoider {
    fn name(&self) -> String {
        if self.eps == DEFAULT_EPSILON {
            "isolated_vertex_avoider".into()
        } else {
            format!("isolated_vertex_avoider:{}", self.eps)
        }
    }

    fn start(&mut self, n: usize, _side: Player, _seed: u64) {
        *self = IsolatedVertexAvoider::new(self.eps);
        self.n = n;
        self.l = (1.0 - 4.0 * self.eps) / 2.0 * (n as f64).ln();
        self.in_c = vec![false; n];
        self.open_to_c = vec![0; n];
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        if self.sacrifice.is_none() && !self.component.is_empty() {
            let heavy = self
                .outside()
                .filter(|&v| state.degree(Player::Enforcer, v) as f64 >= self.l)
                .max_by_key(|&v| (state.degree(Player::Enforcer, v), std::cmp::Reverse(v)));
            if let Some(v) = heavy {
                self.set_sacrifice(v);
            }
        }
        if let Some(v) = self.sacrifice {
            return self.sacrifice_move(state, v);
        }
        if self.component.is_empty() {
            return state.first_unclaimed().expect("choose called on a finished board");
        }
        if let Some(w) = self.follow_up.take() {
            if let Some(e) = self.join_edge(state, w) {
                self.count(JoinCase::FollowUp);
                return e;
            }
        }
        if let Some(&i) = self.internal.first() {
            return state.edge_at(i);
        }

        // forced join: a decision point for the d̄ potential
        let now = Decision {
            sum: self.outside_sum,
            outside: self.n - self.component.len(),
            component: self.component.len(),
            clean: true,
        };
        self.check_growth(now);
        if self.component.len() + 1 >= self.n.saturating_sub(1) {
            self.guarantee_violated = true;
            if self.n >= 64 {
                self.violations
                    .push("C would reach n-1 before any outside vertex reached degree l".into());
            }
            if let Some(v) = self.heaviest_outside(state) {
                self.set_sacrifice(v);
                return self.sacrifice_move(state, v);
            }
        }
        let (v, case) = match self.select_join(state) {
            Ok(pick) => pick,
            Err(()) => match self.fallback_join(state) {
                Some(v) => (v, JoinCase::Fallback),
                None => {
                    // Enforcer owns every edge leaving C
                    let v = self.heaviest_outside(state).expect("some vertex lies outside C");
                    self.count(JoinCase::Fallback);
                    self.last = Some(Decision { clean: false, ..now });
                    self.set_sacrifice(v);
                    return self.sacrifice_move(state, v);
                }
            },
        };
        self.count(case);
        self.last = Some(Decision {
            clean: case != JoinCase::Fallback,
            ..now
        });
        self.join_edge(state, v).expect("joinable vertex has an open edge to C")
    }

    fn observe(&mut self, state: &GameState, mover: Player, e: Edge) {
        let idx = state.index_of(e);
        self.internal.remove(&idx);
        if mover == Player::Enforcer {
            for x in [e.u, e.v] {
                if !self.in_c[x] {
                    self.outside_sum += 1;
                }
            }
        }
        match (self.in_c[e.u], self.in_c[e.v]) {
            (true, false) => self.open_to_c[e.v] -= 1,
            (false, true) => self.open_to_c[e.u] -= 1,
            _ => {}
        }
        if mover == Player::Enforcer {
            if let Some(w) = self.follow_up {
                if e.touches(w) && self.in_c[e.other(w)] {
                    self.follow_up = None;
                    self.cancelled_follow_ups += 1;
                }
            }
            return;
        }
        if self.component.is_empty() {
            for x in [e.u, e.v] {
                self.in_c[x] = true;
                self.outside_sum -= state.degree(Player::Enforcer, x) as u64;
                self.component.push(x);
            }
            for z in 0..self.n {
                if !self.in_c[z] {
                    self.open_to_c[z] =
                        usize::from(state.is_open(z, e.u)) + usize::from(state.is_open(z, e.v));
                }
            }
            return;
        }
        match (self.in_c[e.u], self.in_c[e.v]) {
            (true, false) => self.join(state, e.v),
            (false, true) => self.join(state, e.u),
            (true, true) => {}
            (false, false) => {
                if self.sacrifice.is_none() {
                    self.violations.push(format!("Avoider edge {e} lies outside C"));
                }
            }
        }
    }

    fn audit(&mut self, state: &GameState, level: AuditLevel) -> Vec<String> {
        let mut out = std::mem::take(&mut self.violations);
        let growth = std::mem::take(&mut self.growth_violations);
        if level == AuditLevel::Full {
            out.extend(growth);
            out.extend(self.full_audit(state));
        }
        out
    }

    fn stats(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = JoinCase::ALL
            .iter()
            .zip(self.case_counts)
            .map(|(c, k)| (c.id().to_string(), k.to_string()))
            .collect();
        out.push(("cancelled_follow_ups".into(), self.cancelled_follow_ups.to_string()));
        out.push(("growth_checks".into(), self.growth_checks.to_string()));
        out.push(("component_size".into(), self.component.len().to_string()));
        out.push((
            "sacrifice".into(),
            self.sacrifice.map_or("none".into(), |v| v.to_string()),
        ));
        out.push(("guarantee_violated".into(), self.guarantee_violated.to_string()));
        out
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;

    fn play(s: &mut IsolatedVertexAvoider, st: &mut GameState, p: Player, a: usize, b: usize) {
        let e = Edge::new(a, b);
        st.force_claim(p, e).unwrap();
        s.observe(st, p, e);
    }

    #[test]
    fn threshold_follows_epsilon() {
        let mut s = IsolatedVertexAvoider::new(0.1);
        s.start(128, Player::Avoider, 0);
        assert!((s.threshold() - 0.3 * (128f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn bad_pair_queues_a_follow_up_then_good_vertex_is_joined() {
        // l = 0.3 ln 40 ≈ 1.1, so single Enforcer edges do not trigger the sacrifice
        let n = 40;
        let mut s = IsolatedVertexAvoider::new(0.1);
        s.start(n, Player::Avoider, 0);
        let mut st = new_game(n).unwrap();
        assert_eq!(s.choose(&st), Edge::new(0, 1));
        play(&mut s, &mut st, Player::Avoider, 0, 1);
        play(&mut s, &mut st, Player::Enforcer, 5, 6);
        // every degree-0 vertex has two open edges to C, so all of D is bad
        assert_eq!(s.choose(&st), Edge::new(0, 2));
        assert_eq!(s.case_count(JoinCase::FlatPair), 1);
        play(&mut s, &mut st, Player::Avoider, 0, 2);
        // Enforcer ties the queued vertex 3 to C, which cancels the follow-up
        play(&mut s, &mut st, Player::Enforcer, 2, 3);
        assert_eq!(s.choose(&st), Edge::new(1, 2));
        play(&mut s, &mut st, Player::Avoider, 1, 2);
        play(&mut s, &mut st, Player::Enforcer, 7, 8);
        // vertex 4 has three open edges to C = {0,1,2}: good, degree 0
        assert!(s.is_good(4));
        assert_eq!(s.choose(&st), Edge::new(0, 4));
        assert_eq!(s.case_count(JoinCase::FlatGood), 1);
    }

    #[test]
    fn follow_up_overrides_internal_edges() {
        let n = 40;
        let mut s = IsolatedVertexAvoider::new(0.1);
        s.start(n, Player::Avoider, 0);
        let mut st = new_game(n).unwrap();
        play(&mut s, &mut st, Player::Avoider, 0, 1);
        play(&mut s, &mut st, Player::Enforcer, 5, 6);
        assert_eq!(s.choose(&st), Edge::new(0, 2));
        play(&mut s, &mut st, Player::Avoider, 0, 2);
        play(&mut s, &mut st, Player::Enforcer, 9, 10);
        // (1,2) is an open internal edge, but 3 was queued
        assert_eq!(s.choose(&st), Edge::new(0, 3));
        assert_eq!(s.case_count(JoinCase::FollowUp), 1);
    }

    #[test]
    fn case_predicates_on_single_enforcer_edge() {
        let n = 40;
        let mut s = IsolatedVertexAvoider::new(0.1);
        s.start(n, Player::Avoider, 0);
        let mut st = new_game(n).unwrap();
        play(&mut s, &mut st, Player::Avoider, 0, 1);
        play(&mut s, &mut st, Player::Enforcer, 2, 3);
        // d̄ = 2/38; nobody has degree ≤ d̄ - 1, so case 2 with D = degree-0 vertices
        assert!((s.average_outside_degree() - 2.0 / 38.0).abs() < 1e-12);
        let e = s.choose(&st);
        assert_eq!(e, Edge::new(0, 4));
        assert_eq!(s.case_count(JoinCase::FlatPair), 1);
        assert_eq!(s.follow_up, Some(5));
    }

    #[test]
    fn sacrifice_avoids_heavy_vertex() {
        let n = 8;
        let mut s = IsolatedVertexAvoider::new(0.1);
        s.start(n, Player::Avoider, 0);
        let mut st = new_game(n).unwrap();
        play(&mut s, &mut st, Player::Avoider, 0, 1);
        play(&mut s, &mut st, Player::Enforcer, 2, 7);
        play(&mut s, &mut st, Player::Avoider, 0, 2);
        play(&mut s, &mut st, Player::Enforcer, 3, 7);
        // l = 0.3 ln 8 ≈ 0.62, so vertex 7 (degree 2) is the heaviest outside vertex
        let e = s.choose(&st);
        assert_eq!(s.sacrifice_vertex(), Some(7));
        assert!(!e.touches(7));
    }
}
