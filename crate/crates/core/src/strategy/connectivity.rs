use std::collections::BTreeSet;

use crate::game::{AuditLevel, Edge, GameState, Player, Strategy};

use super::TieBreak;

/// Enforcer for the connectivity game. A safe edge lies inside one of
/// Avoider's components; a dangerous edge joins two. Safe edges are claimed
/// first. Dangerous edges are taken in stages `i = 1..=k`, `k = ⌈log₂ n⌉`,
/// keeping the dangerous graph's maximum degree at most `2i`; after stage `k`
/// any dangerous edge is allowed.
#[derive(Clone, Debug)]
pub struct ConnectivityEnforcer {
    tie: TieBreak,
    n: usize,
    k: usize,
    comp: Vec<usize>,
    members: Vec<Vec<usize>>,
    components: usize,
    safe: BTreeSet<usize>,
    dangerous_degree: Vec<usize>,
    stage: usize,
    phase_two: bool,
    // component count when each stage closed; entry 0 is n
    stage_counts: Vec<usize>,
    phase_two_dangerous: usize,
    dangerous_total: usize,
    awaiting_merge: Option<usize>,
    violations: Vec<String>,
}

impl ConnectivityEnforcer {
    pub fn new() -> Self {
        Self::with_tie_break(TieBreak::Lex)
    }

    pub fn with_tie_break(tie: TieBreak) -> Self {
        ConnectivityEnforcer {
            tie,
            n: 0,
            k: 0,
            comp: Vec::new(),
            members: Vec::new(),
            components: 0,
            safe: BTreeSet::new(),
            dangerous_degree: Vec::new(),
            stage: 1,
            phase_two: false,
            stage_counts: Vec::new(),
            phase_two_dangerous: 0,
            dangerous_total: 0,
            awaiting_merge: None,
            violations: Vec::new(),
        }
    }

    pub fn stages(&self) -> usize {
        self.k
    }

    /// Component counts at the close of each stage, starting with `c_0 = n`.
    pub fn stage_counts(&self) -> &[usize] {
        &self.stage_counts
    }

    pub fn phase_two_dangerous(&self) -> usize {
        self.phase_two_dangerous
    }

    pub fn max_dangerous_degree(&self) -> usize {
        self.dangerous_degree.iter().copied().max().unwrap_or(0)
    }

    fn is_dangerous(&self, e: Edge) -> bool {
        self.comp[e.u] != self.comp[e.v]
    }

    fn close_stage(&mut self) {
        self.stage_counts.push(self.components);
        let i = self.stage;
        let cap = self.n as f64 / (1u64 << i.min(63)) as f64 + (2 * i) as f64;
        if self.components as f64 > cap + 1e-9 {
            self.violations.push(format!(
                "stage {i} closed with {} components, above n/2^i + 2i = {cap:.3}",
                self.components
            ));
        }
        if i >= self.k {
            self.phase_two = true;
        } else {
            self.stage += 1;
        }
    }

    fn pick_dangerous(&mut self, state: &GameState) -> Option<Edge> {
        loop {
            let cap = if self.phase_two { usize::MAX } else { 2 * self.stage };
            let deg = &self.dangerous_degree;
            let comp = &self.comp;
            let open = state
                .unclaimed()
                .filter(|e| comp[e.u] != comp[e.v] && deg[e.u] < cap && deg[e.v] < cap);
            if let Some(e) = self.tie.pick(open) {
                return Some(e);
            }
            if self.phase_two {
                return None;
            }
            self.close_stage();
        }
    }
}

impl Default for ConnectivityEnforcer {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for ConnectivityEnforcer {
    fn name(&self) -> String {
        if self.tie.is_random() {
            "connectivity_enforcer:random".into()
        } else {
            "connectivity_enforcer".into()
        }
    }

    fn start(&mut self, n: usize, _side: Player, seed: u64) {
        self.n = n;
        self.k = (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize;
        self.comp = (0..n).collect();
        self.members = (0..n).map(|v| vec![v]).collect();
        self.components = n;
        self.safe.clear();
        self.dangerous_degree = vec![0; n];
        self.stage = 1;
        self.phase_two = false;
        self.stage_counts = vec![n];
        self.phase_two_dangerous = 0;
        self.dangerous_total = 0;
        self.awaiting_merge = None;
        self.violations.clear();
        self.tie.reseed(seed);
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        let safe = if self.tie.is_random() {
            let open = self.safe.iter().map(|&i| state.edge_at(i));
            self.tie.pick(open)
        } else {
            self.safe.first().map(|&i| state.edge_at(i))
        };
        if let Some(e) = safe {
            return e;
        }
        match self.pick_dangerous(state) {
            Some(e) => {
                self.dangerous_degree[e.u] += 1;
                self.dangerous_degree[e.v] += 1;
                self.dangerous_total += 1;
                if self.phase_two {
                    self.phase_two_dangerous += 1;
                    if self.phase_two_dangerous > 2 * self.k {
                        self.violations.push(format!(
                            "{} dangerous moves after the last stage, above 2k = {}",
                            self.phase_two_dangerous,
                            2 * self.k
                        ));
                    }
                }
                self.awaiting_merge = Some(self.components);
                e
            }
            // safe set out of sync; fall back rather than stall
            None => state.first_unclaimed().expect("choose called on a finished board"),
        }
    }

    fn observe(&mut self, state: &GameState, mover: Player, e: Edge) {
        self.safe.remove(&state.index_of(e));
        if mover != Player::Avoider {
            return;
        }
        if self.is_dangerous(e) {
            let (a, b) = (self.comp[e.u], self.comp[e.v]);
            let (small, big) = if self.members[a].len() < self.members[b].len() {
                (a, b)
            } else {
                (b, a)
            };
            let moved = std::mem::take(&mut self.members[small]);
            for &x in &moved {
                for &y in &self.members[big] {
                    if state.is_open(x, y) {
                        self.safe.insert(state.index_of(Edge::new(x, y)));
                    }
                }
            }
            for &x in &moved {
                self.comp[x] = big;
            }
            self.members[big].extend(moved);
            self.components -= 1;
        }
        if let Some(before) = self.awaiting_merge.take() {
            if self.components >= before {
                self.violations
                    .push(format!("Avoider answered a dangerous move with {e}, which merged nothing"));
            }
        }
    }

    fn audit(&mut self, state: &GameState, level: AuditLevel) -> Vec<String> {
        let mut out = std::mem::take(&mut self.violations);
        let cap = if self.phase_two { 4 * self.k } else { 2 * self.stage };
        let max = self.max_dangerous_degree();
        if max > cap {
            out.push(format!("dangerous graph has degree {max}, above {cap}"));
        }
        if level == AuditLevel::Full {
            for e in state.unclaimed() {
                let want = !self.is_dangerous(e);
                if want != self.safe.contains(&state.index_of(e)) {
                    out.push(format!("safe set out of date at {e}"));
                }
            }
        }
        out
    }

    fn stats(&self) -> Vec<(String, String)> {
        let counts: Vec<String> = self.stage_counts.iter().map(|c| c.to_string()).collect();
        vec![
            ("stages".into(), self.k.to_string()),
            ("stage_components".into(), counts.join(",")),
            ("dangerous_moves".into(), self.dangerous_total.to_string()),
            ("phase_two_dangerous".into(), self.phase_two_dangerous.to_string()),
            ("max_dangerous_degree".into(), self.max_dangerous_degree().to_string()),
        ]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;

    #[test]
    fn classifies_safe_and_dangerous() {
        // Avoider components {0,1,2} and {3}
        let mut s = ConnectivityEnforcer::new();
        s.start(4, Player::Enforcer, 0);
        let mut st = new_game(4).unwrap();
        for (a, b) in [(0, 1), (1, 2)] {
            st.force_claim(Player::Avoider, Edge::new(a, b)).unwrap();
            s.observe(&st, Player::Avoider, Edge::new(a, b));
        }
        assert!(!s.is_dangerous(Edge::new(0, 2)));
        assert!(s.is_dangerous(Edge::new(2, 3)));
        assert_eq!(s.choose(&st), Edge::new(0, 2));
    }

    #[test]
    fn stage_count_is_ceil_log2() {
        let mut s = ConnectivityEnforcer::new();
        for (n, k) in [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (16, 4), (17, 5)] {
            s.start(n, Player::Enforcer, 0);
            assert_eq!(s.stages(), k, "n={n}");
        }
    }

    #[test]
    fn dangerous_degree_capped_per_stage() {
        // with no Avoider edges every edge is dangerous; stage 1 allows degree < 2
        let mut s = ConnectivityEnforcer::new();
        s.start(6, Player::Enforcer, 0);
        let mut st = new_game(6).unwrap();
        st.apply_move(Edge::new(4, 5)).unwrap();
        s.observe(&st, Player::Avoider, Edge::new(4, 5));
        for _ in 0..3 {
            let e = s.choose(&st);
            st.apply_move(e).unwrap();
            s.observe(&st, Player::Enforcer, e);
            // Avoider keeps playing inside {4,5}'s component where possible
            let reply = s
                .safe
                .first()
                .map(|&i| st.edge_at(i))
                .unwrap_or_else(|| st.first_unclaimed().unwrap());
            st.apply_move(reply).unwrap();
            s.observe(&st, Player::Avoider, reply);
        }
        assert!(s.max_dangerous_degree() <= 2 * s.stage);
    }
}
