use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Edge, GameState, Player, Strategy};
use crate::props::ParityUnionFind;

use super::PlanarityLayout;

/// What a greedy adversary tries to disrupt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyTarget {
    /// Enforcer against the planarity avoider: hits pool and class edges.
    Planarity,
    /// Enforcer against the bi-bunch avoider: wastes cross edges, eats untouched vertices.
    BiBunch,
    /// Enforcer against the isolated-vertex avoider: spreads degree thinly.
    IsolatedVertex,
    /// Avoider against the odd-cycle enforcer: keeps its graph bipartite.
    OddCycle,
    /// Avoider against the connectivity enforcer: avoids merging components.
    Connectivity,
}

impl GreedyTarget {
    pub const ALL: [GreedyTarget; 5] = [
        GreedyTarget::Planarity,
        GreedyTarget::BiBunch,
        GreedyTarget::IsolatedVertex,
        GreedyTarget::OddCycle,
        GreedyTarget::Connectivity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            GreedyTarget::Planarity => "planarity",
            GreedyTarget::BiBunch => "bibunch",
            GreedyTarget::IsolatedVertex => "isolated_vertex",
            GreedyTarget::OddCycle => "odd_cycle",
            GreedyTarget::Connectivity => "connectivity",
        }
    }

    pub fn from_id(s: &str) -> Option<GreedyTarget> {
        Self::ALL.into_iter().find(|t| t.id() == s)
    }

    pub fn side(self) -> Player {
        match self {
            GreedyTarget::OddCycle | GreedyTarget::Connectivity => Player::Avoider,
            _ => Player::Enforcer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdversaryKind {
    Random,
    Lex,
    Greedy(GreedyTarget),
}

/// Generic opponent used to exercise the dedicated strategies.
#[derive(Clone, Debug)]
pub struct Adversary {
    kind: AdversaryKind,
    rng: ChaCha8Rng,
    // static score buckets for the planarity target, best first
    buckets: Vec<Vec<usize>>,
    bucket_cursor: Vec<usize>,
}

impl Adversary {
    pub fn new(kind: AdversaryKind) -> Self {
        Adversary {
            kind,
            rng: ChaCha8Rng::seed_from_u64(0),
            buckets: Vec::new(),
            bucket_cursor: Vec::new(),
        }
    }

    pub fn random() -> Self {
        Self::new(AdversaryKind::Random)
    }

    pub fn lex() -> Self {
        Self::new(AdversaryKind::Lex)
    }

    pub fn greedy(target: GreedyTarget) -> Self {
        Self::new(AdversaryKind::Greedy(target))
    }

    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    fn random_edge(&mut self, state: &GameState) -> Edge {
        let m = state.num_edges();
        // rejection sampling while the board is mostly open
        if state.unclaimed_count() * 4 >= m {
            loop {
                let i = self.rng.gen_range(0..m);
                if state.owner_at(i).is_none() {
                    return state.edge_at(i);
                }
            }
        }
        let k = self.rng.gen_range(0..state.unclaimed_count());
        state.unclaimed().nth(k).expect("k below unclaimed count")
    }

    /// Best-scoring unclaimed edge, ties broken uniformly.
    fn best_by(&mut self, state: &GameState, mut score: impl FnMut(Edge) -> i64) -> Edge {
        let mut best = i64::MIN;
        let mut chosen = None;
        let mut ties = 0u64;
        for e in state.unclaimed() {
            let s = score(e);
            if s > best {
                best = s;
                chosen = Some(e);
                ties = 1;
            } else if s == best {
                ties += 1;
                if self.rng.gen_range(0..ties) == 0 {
                    chosen = Some(e);
                }
            }
        }
        chosen.expect("choose called on a finished board")
    }

    fn setup_planarity(&mut self, n: usize) {
        self.buckets = vec![Vec::new(); 4];
        let layout = PlanarityLayout::new(n);
        for (i, e) in crate::game::all_edges(n).into_iter().enumerate() {
            let score = match &layout {
                None => 0,
                Some(l) => {
                    let pool = [e.u, e.v].iter().filter(|&&x| l.in_pool(x)).count();
                    let block = [e.u, e.v].iter().filter(|&&x| l.block_of(x).is_some()).count();
                    if pool == 2 {
                        3
                    } else if pool == 1 && block == 1 {
                        2
                    } else if pool == 1 {
                        1
                    } else {
                        0
                    }
                }
            };
            self.buckets[3 - score].push(i);
        }
        for b in &mut self.buckets {
            b.shuffle(&mut self.rng);
        }
        self.bucket_cursor = vec![0; 4];
    }

    fn planarity_move(&mut self, state: &GameState) -> Edge {
        for (b, cursor) in self.buckets.iter().zip(self.bucket_cursor.iter_mut()) {
            while let Some(&i) = b.get(*cursor) {
                if state.owner_at(i).is_none() {
                    return state.edge_at(i);
                }
                *cursor += 1;
            }
        }
        state.first_unclaimed().expect("choose called on a finished board")
    }

    fn avoider_colouring(state: &GameState) -> ParityUnionFind {
        let mut uf = ParityUnionFind::new(state.n());
        for e in state.avoider_edges() {
            uf.add_edge(e.u, e.v);
        }
        uf
    }
}

impl Strategy for Adversary {
    fn name(&self) -> String {
        match self.kind {
            AdversaryKind::Random => "adversary:random".into(),
            AdversaryKind::Lex => "adversary:lex".into(),
            AdversaryKind::Greedy(t) => format!("adversary:greedy:{}", t.id()),
        }
    }

    fn start(&mut self, n: usize, _side: Player, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        if self.kind == AdversaryKind::Greedy(GreedyTarget::Planarity) {
            self.setup_planarity(n);
        }
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        let target = match self.kind {
            AdversaryKind::Random => return self.random_edge(state),
            AdversaryKind::Lex => {
                return state.first_unclaimed().expect("choose called on a finished board")
            }
            AdversaryKind::Greedy(t) => t,
        };
        match target {
            GreedyTarget::Planarity => self.planarity_move(state),
            GreedyTarget::BiBunch => {
                let mut uf = Self::avoider_colouring(state);
                self.best_by(state, |e| {
                    let touched = |x| {
                        state.degree(Player::Avoider, x) + state.degree(Player::Enforcer, x) > 0
                    };
                    if uf.opposite_sides(e.u, e.v) {
                        3
                    } else {
                        match (touched(e.u), touched(e.v)) {
                            (false, false) => 2,
                            (true, true) => 0,
                            _ => 1,
                        }
                    }
                })
            }
            GreedyTarget::IsolatedVertex => {
                let mut uf = crate::props::ComponentTracker::new(state.n());
                for e in state.avoider_edges() {
                    uf.add_edge(e.u, e.v);
                }
                let n = state.n() as i64;
                self.best_by(state, |e| {
                    if uf.same(e.u, e.v) {
                        return 4 * n;
                    }
                    let big = uf.component_size(e.u).max(uf.component_size(e.v)) as i64;
                    let d = state.degree(Player::Enforcer, e.u).max(state.degree(Player::Enforcer, e.v));
                    // touch the large component, keep outside degrees flat
                    2 * n + big - d as i64
                })
            }
            GreedyTarget::OddCycle => {
                let mut uf = Self::avoider_colouring(state);
                self.best_by(state, |e| {
                    if uf.opposite_sides(e.u, e.v) {
                        2
                    } else if !uf.same_component(e.u, e.v) {
                        1
                    } else {
                        0
                    }
                })
            }
            GreedyTarget::Connectivity => {
                let mut uf = crate::props::ComponentTracker::new(state.n());
                for e in state.avoider_edges() {
                    uf.add_edge(e.u, e.v);
                }
                let last_merge = uf.component_count() <= 2;
                let n = state.n() as i64;
                self.best_by(state, |e| {
                    if uf.same(e.u, e.v) {
                        return 3 * n;
                    }
                    if last_merge {
                        return 0;
                    }
                    // merge the smallest pieces first
                    2 * n - (uf.component_size(e.u) + uf.component_size(e.v)) as i64
                })
            }
        }
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
    fn lex_takes_least_edge() {
        let mut a = Adversary::lex();
        a.start(4, Player::Enforcer, 0);
        let mut st = new_game(4).unwrap();
        st.apply_move(Edge::new(0, 1)).unwrap();
        assert_eq!(a.choose(&st), Edge::new(0, 2));
    }

    #[test]
    fn random_is_seed_deterministic_and_legal() {
        let run = |seed| {
            let mut a = Adversary::random();
            a.start(8, Player::Avoider, seed);
            let mut st = new_game(8).unwrap();
            let mut seq = Vec::new();
            while !st.is_over() {
                let e = a.choose(&st);
                st.apply_move(e).unwrap();
                seq.push(e);
            }
            seq
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn odd_cycle_greedy_prefers_consistent_edges() {
        let mut a = Adversary::greedy(GreedyTarget::OddCycle);
        a.start(5, Player::Avoider, 1);
        let mut st = new_game(5).unwrap();
        st.apply_move(Edge::new(0, 1)).unwrap();
        st.apply_move(Edge::new(3, 4)).unwrap();
        st.apply_move(Edge::new(1, 2)).unwrap();
        st.apply_move(Edge::new(2, 4)).unwrap();
        // 0-1-2 is a path; (0,2) would close a triangle
        for _ in 0..20 {
            assert_ne!(a.choose(&st), Edge::new(0, 2));
        }
    }
}
