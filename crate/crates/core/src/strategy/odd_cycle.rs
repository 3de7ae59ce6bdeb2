use std::collections::BTreeSet;

use crate::game::{Edge, GameState, Player, Strategy};

use super::TieBreak;

/// Enforcer for the non-bipartite game: keeps a 2-colouring of each of
/// Avoider's components and claims edges that join opposite classes of one
/// component whenever it can. Any other move is counted as possibly bad.
#[derive(Clone, Debug)]
pub struct OddCycleEnforcer {
    tie: TieBreak,
    n: usize,
    comp: Vec<usize>,
    side: Vec<bool>,
    members: Vec<Vec<usize>>,
    // unclaimed edges between opposite classes of one component, by edge index
    targets: BTreeSet<usize>,
    possibly_bad: usize,
    odd_cycle: bool,
    violations: Vec<String>,
}

impl OddCycleEnforcer {
    pub fn new() -> Self {
        Self::with_tie_break(TieBreak::Lex)
    }

    pub fn with_tie_break(tie: TieBreak) -> Self {
        OddCycleEnforcer {
            tie,
            n: 0,
            comp: Vec::new(),
            side: Vec::new(),
            members: Vec::new(),
            targets: BTreeSet::new(),
            possibly_bad: 0,
            odd_cycle: false,
            violations: Vec::new(),
        }
    }

    pub fn possibly_bad_moves(&self) -> usize {
        self.possibly_bad
    }

    /// Edge indices Enforcer would currently prefer.
    pub fn target_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().copied()
    }

    fn merge(&mut self, state: &GameState, x: usize, y: usize) {
        let (cx, cy) = (self.comp[x], self.comp[y]);
        let (small, big, xs, yb) = if self.members[cx].len() < self.members[cy].len() {
            (cx, cy, x, y)
        } else {
            (cy, cx, y, x)
        };
        let flip = self.side[xs] == self.side[yb];
        let moved = std::mem::take(&mut self.members[small]);
        for &z in &moved {
            self.side[z] ^= flip;
        }
        for &z in &moved {
            for &w in &self.members[big] {
                if self.side[z] != self.side[w] && state.is_open(z, w) {
                    self.targets.insert(state.index_of(Edge::new(z, w)));
                }
            }
        }
        for &z in &moved {
            self.comp[z] = big;
        }
        self.members[big].extend(moved);
    }
}

impl Default for OddCycleEnforcer {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for OddCycleEnforcer {
    fn name(&self) -> String {
        if self.tie.is_random() {
            "odd_cycle_enforcer:random".into()
        } else {
            "odd_cycle_enforcer".into()
        }
    }

    fn start(&mut self, n: usize, _side: Player, seed: u64) {
        self.n = n;
        self.comp = (0..n).collect();
        self.side = vec![false; n];
        self.members = (0..n).map(|v| vec![v]).collect();
        self.targets.clear();
        self.possibly_bad = 0;
        self.odd_cycle = false;
        self.violations.clear();
        self.tie.reseed(seed);
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        let pick = if self.tie.is_random() {
            let targets = self.targets.iter().map(|&i| state.edge_at(i));
            self.tie.pick(targets)
        } else {
            self.targets.first().map(|&i| state.edge_at(i))
        };
        if let Some(e) = pick {
            return e;
        }
        if !self.odd_cycle {
            self.possibly_bad += 1;
            if self.possibly_bad > self.n.saturating_sub(1) {
                self.violations.push(format!(
                    "{} possibly bad moves exceed n-1 = {}",
                    self.possibly_bad,
                    self.n - 1
                ));
            }
        }
        self.tie
            .pick(state.unclaimed())
            .expect("choose called on a finished board")
    }

    fn observe(&mut self, state: &GameState, mover: Player, e: Edge) {
        self.targets.remove(&state.index_of(e));
        if mover != Player::Avoider {
            return;
        }
        if self.comp[e.u] != self.comp[e.v] {
            self.merge(state, e.u, e.v);
        } else if self.side[e.u] == self.side[e.v] {
            self.odd_cycle = true;
        }
    }

    fn audit(&mut self, state: &GameState, level: crate::game::AuditLevel) -> Vec<String> {
        let mut out = std::mem::take(&mut self.violations);
        if level == crate::game::AuditLevel::Full && !self.odd_cycle {
            for &e in state.avoider_edges() {
                if self.side[e.u] == self.side[e.v] || self.comp[e.u] != self.comp[e.v] {
                    out.push(format!("colouring disagrees with Avoider edge {e}"));
                }
            }
            for e in state.unclaimed() {
                let want = self.comp[e.u] == self.comp[e.v] && self.side[e.u] != self.side[e.v];
                if want != self.targets.contains(&state.index_of(e)) {
                    out.push(format!("target set out of date at {e}"));
                }
            }
        }
        out
    }

    fn stats(&self) -> Vec<(String, String)> {
        vec![("possibly_bad_moves".into(), self.possibly_bad.to_string())]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
