use crate::game::{AuditLevel, Edge, GameState, Player, Strategy};
use crate::props::is_planar;

const NONE: usize = usize::MAX;

/// Vertex partition used by [`PlanarityAvoider`]: two hubs `v1 = 0`,
/// `v2 = 1`, a pool `A`, then four blocks `N11, N12, N21, N22` of `s - 1`
/// vertices each, where `s = ⌊√n⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarityLayout {
    pub n: usize,
    pub s: usize,
    pub hubs: [usize; 2],
    pub pool: std::ops::Range<usize>,
    pub blocks: [std::ops::Range<usize>; 4],
}

impl PlanarityLayout {
    /// `None` when `n` is too small for a non-empty pool.
    pub fn new(n: usize) -> Option<Self> {
        let s = n.isqrt();
        if s < 2 {
            return None;
        }
        let block = s - 1;
        let pool_len = (n + 2).checked_sub(4 * s).filter(|&l| l > 0)?;
        let start = 2 + pool_len;
        let blocks = [0, 1, 2, 3].map(|j| start + j * block..start + (j + 1) * block);
        debug_assert_eq!(blocks[3].end, n);
        Some(PlanarityLayout {
            n,
            s,
            hubs: [0, 1],
            pool: 2..start,
            blocks,
        })
    }

    pub fn in_pool(&self, v: usize) -> bool {
        self.pool.contains(&v)
    }

    /// Index `0..4` of the block holding `v`, if any.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarityStage {
    /// Pairing `(a, v1)` with `(a, v2)` over the pool.
    Hubs,
    /// Pairing `(a, n_i1)` with `(a, n_i2)` over `A_i \ G_i`.
    Anchors,
    /// Growing a linear forest inside `A_11, A_12, A_21, A_22` in turn.
    Paths(usize),
    /// Guarantee spent; lexicographic greedy.
    Done,
}

/// Three-stage pairing strategy keeping Avoider's graph planar for at least
/// `3n - 28√n` rounds.
#[derive(Clone, Debug)]
pub struct PlanarityAvoider {
    layout: Option<PlanarityLayout>,
    stage: PlanarityStage,
    // active pair of vertex a: the two partners of its pair edges
    pair: Vec<Option<[usize; 2]>>,
    pair_queue: Vec<usize>,
    queue_cursor: usize,
    active_pairs: usize,
    last_enforcer: Option<Edge>,
    star: Vec<Option<usize>>,
    anchors: [usize; 4],
    excluded: Vec<Vec<usize>>,
    // A_{ij}: vertices of the pool joined to anchor j
    classes: [Vec<usize>; 4],
    class_of: Vec<Option<usize>>,
    // for path endpoints: the other endpoint; NONE for interior vertices
    other_end: Vec<usize>,
    paths_left: [usize; 4],
    stage_moves: [usize; 3],
    fallback_moves: usize,
    guarantee_round: Option<usize>,
    violations: Vec<String>,
}

impl PlanarityAvoider {
    pub fn new() -> Self {
        PlanarityAvoider {
            layout: None,
            stage: PlanarityStage::Done,
            pair: Vec::new(),
            pair_queue: Vec::new(),
            queue_cursor: 0,
            active_pairs: 0,
            last_enforcer: None,
            star: Vec::new(),
            anchors: [NONE; 4],
            excluded: vec![Vec::new(), Vec::new()],
            classes: Default::default(),
            class_of: Vec::new(),
            other_end: Vec::new(),
            paths_left: [0; 4],
            stage_moves: [0; 3],
            fallback_moves: 0,
            guarantee_round: None,
            violations: Vec::new(),
        }
    }

    pub fn stage(&self) -> PlanarityStage {
        self.stage
    }

    pub fn layout(&self) -> Option<&PlanarityLayout> {
        self.layout.as_ref()
    }

    /// Moves made in each of the three stages so far.
    pub fn stage_moves(&self) -> [usize; 3] {
        self.stage_moves
    }

    /// Round at which the third stage finished.
    pub fn guarantee_round(&self) -> Option<usize> {
        self.guarantee_round
    }

    pub fn anchors(&self) -> [usize; 4] {
        self.anchors
    }

    /// Number of paths left in each `A_ij` when its stage-3 pass ended.
    pub fn paths_left(&self) -> [usize; 4] {
        self.paths_left
    }

    fn add_pair(&mut self, a: usize, partners: [usize; 2]) {
        self.pair[a] = Some(partners);
        self.pair_queue.push(a);
        self.active_pairs += 1;
    }

    fn retire(&mut self, a: usize) {
        if self.pair[a].take().is_some() {
            self.active_pairs -= 1;
        }
    }

    /// The untouched partner edge when Enforcer just claimed one edge of an active pair.
    fn pair_reply(&mut self) -> Option<(usize, usize)> {
        let e = self.last_enforcer?;
        for a in [e.u, e.v] {
            if let Some(p) = self.pair.get(a).copied().flatten() {
                let other = e.other(a);
                if other == p[0] {
                    return Some((a, p[1]));
                }
                if other == p[1] {
                    return Some((a, p[0]));
                }
            }
        }
        None
    }

    fn next_free_pair(&mut self) -> Option<(usize, usize)> {
        while let Some(&a) = self.pair_queue.get(self.queue_cursor) {
            if let Some(p) = self.pair[a] {
                return Some((a, p[0]));
            }
            self.queue_cursor += 1;
        }
        None
    }

    fn begin_anchor_stage(&mut self, state: &GameState) {
        let layout = self.layout.clone().expect("layout set");
        let s = layout.s;
        let enforcer_pool_degree = |x: usize| layout.pool.clone().filter(|&a| state.owner(Edge::new(a, x)) == Some(Player::Enforcer)).count();
        for (j, block) in layout.blocks.iter().enumerate() {
            let counts: Vec<(usize, usize)> =
                block.clone().map(|x| (x, enforcer_pool_degree(x))).collect();
            let chosen = counts
                .iter()
                .find(|&&(_, c)| c <= s)
                .or_else(|| counts.iter().min_by_key(|&&(x, c)| (c, x)))
                .copied()
                .expect("blocks are non-empty");
            if chosen.1 > s {
                self.violations.push(format!(
                    "no vertex of block {j} has at most {s} Enforcer neighbours in the pool"
                ));
            }
            self.anchors[j] = chosen.0;
        }
        self.pair_queue.clear();
        self.queue_cursor = 0;
        for i in 0..2 {
            let (x, y) = (self.anchors[2 * i], self.anchors[2 * i + 1]);
            let mut excluded = Vec::new();
            for a in layout.pool.clone() {
                if self.star[a] != Some(i) {
                    continue;
                }
                let blocked = state.owner(Edge::new(a, x)) == Some(Player::Enforcer)
                    || state.owner(Edge::new(a, y)) == Some(Player::Enforcer);
                if blocked {
                    excluded.push(a);
                } else {
                    self.add_pair(a, [x, y]);
                }
            }
            if excluded.len() > 2 * s {
                self.violations
                    .push(format!("|G_{}| = {} exceeds 2s = {}", i + 1, excluded.len(), 2 * s));
            }
            self.excluded[i] = excluded;
        }
        self.stage = PlanarityStage::Anchors;
    }

    fn begin_path_stage(&mut self) {
        for class in &mut self.classes {
            class.sort_unstable();
            for &x in class.iter() {
                self.other_end[x] = x;
            }
        }
        self.stage = PlanarityStage::Paths(0);
    }

    /// Lexicographically least unclaimed edge joining endpoints of two paths in class `j`.
    fn path_join(&self, state: &GameState, j: usize) -> Option<Edge> {
        let class = &self.classes[j];
        for (i, &x) in class.iter().enumerate() {
            if self.other_end[x] == NONE {
                continue;
            }
            for &y in &class[i + 1..] {
                if self.other_end[y] == NONE || self.other_end[x] == y {
                    continue;
                }
                if state.is_open(x, y) {
                    return Some(Edge::new(x, y));
                }
            }
        }
        None
    }

    fn count_paths(&self, j: usize) -> usize {
        let class = &self.classes[j];
        let ends = class.iter().filter(|&&x| self.other_end[x] != NONE).count();
        let singles = class.iter().filter(|&&x| self.other_end[x] == x).count();
        (ends + singles) / 2
    }

    fn join_paths(&mut self, e: Edge) {
        let (x, y) = (e.u, e.v);
        let (p, q) = (self.other_end[x], self.other_end[y]);
        if x != p {
            self.other_end[x] = NONE;
        }
        if y != q {
            self.other_end[y] = NONE;
        }
        self.other_end[p] = q;
        self.other_end[q] = p;
    }

    fn finish(&mut self, state: &GameState) {
        self.stage = PlanarityStage::Done;
        self.guarantee_round = Some(state.round());
        let problems = self.structure_problems(state.avoider_edges());
        self.violations.extend(problems);
    }

    /// Checks that Avoider's stage edges form two stars, four `K_{2,m}`
    /// subgraphs and linear forests inside the classes, and that they are planar.
    pub fn structure_problems(&self, avoider_edges: &[Edge]) -> Vec<String> {
        let Some(layout) = &self.layout else {
            return Vec::new();
        };
        let made = self.stage_moves.iter().sum::<usize>().min(avoider_edges.len());
        let edges = &avoider_edges[..made];
        let mut out = Vec::new();
        let mut forest_degree = vec![0usize; layout.n];
        let mut forest = crate::props::ComponentTracker::new(layout.n);
        for &e in edges {
            let hub = layout.hubs.iter().position(|&h| e.touches(h));
            let ok = if let Some(i) = hub {
                let a = e.other(layout.hubs[i]);
                layout.in_pool(a) && self.star[a] == Some(i)
            } else if let Some(j) = self.anchors.iter().position(|&x| e.touches(x)) {
                let a = e.other(self.anchors[j]);
                self.class_of[a] == Some(j)
            } else {
                match (self.class_of[e.u], self.class_of[e.v]) {
                    (Some(a), Some(b)) if a == b => {
                        forest_degree[e.u] += 1;
                        forest_degree[e.v] += 1;
                        let acyclic = forest.add_edge(e.u, e.v);
                        acyclic && forest_degree[e.u] <= 2 && forest_degree[e.v] <= 2
                    }
                    _ => false,
                }
            };
            if !ok {
                out.push(format!("stage edge {e} breaks the stars/K_2,m/linear-forest shape"));
            }
        }
        if !is_planar(layout.n, edges) {
            out.push("Avoider's stage graph is not planar".into());
        }
        out
    }
}

impl Default for PlanarityAvoider {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for PlanarityAvoider {
    fn name(&self) -> String {
        "planarity_avoider".into()
    }

    fn start(&mut self, n: usize, _side: Player, _seed: u64) {
        let fresh = PlanarityAvoider::new();
        *self = fresh;
        self.layout = PlanarityLayout::new(n);
        self.pair = vec![None; n];
        self.star = vec![None; n];
        self.class_of = vec![None; n];
        self.other_end = vec![NONE; n];
        if let Some(layout) = self.layout.clone() {
            for a in layout.pool {
                self.add_pair(a, layout.hubs);
            }
            self.stage = PlanarityStage::Hubs;
        }
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        loop {
            match self.stage {
                PlanarityStage::Hubs | PlanarityStage::Anchors => {
                    if self.active_pairs == 0 {
                        if self.stage == PlanarityStage::Hubs {
                            self.begin_anchor_stage(state);
                        } else {
                            self.begin_path_stage();
                        }
                        continue;
                    }
                    let (a, partner) = match self.pair_reply() {
                        Some(m) => m,
                        None => self.next_free_pair().expect("active pair exists"),
                    };
                    self.retire(a);
                    let slot = if self.stage == PlanarityStage::Hubs { 0 } else { 1 };
                    self.stage_moves[slot] += 1;
                    if slot == 0 {
                        self.star[a] = Some(partner);
                    } else {
                        let j = self.anchors.iter().position(|&x| x == partner).expect("anchor");
                        self.classes[j].push(a);
                        self.class_of[a] = Some(j);
                    }
                    return Edge::new(a, partner);
                }
                PlanarityStage::Paths(j) => {
                    if let Some(e) = self.path_join(state, j) {
                        self.join_paths(e);
                        self.stage_moves[2] += 1;
                        return e;
                    }
                    self.paths_left[j] = self.count_paths(j);
                    if j + 1 < 4 {
                        self.stage = PlanarityStage::Paths(j + 1);
                    } else {
                        self.finish(state);
                    }
                }
                PlanarityStage::Done => {
                    self.fallback_moves += 1;
                    return state.first_unclaimed().expect("choose called on a finished board");
                }
            }
        }
    }

    fn observe(&mut self, _state: &GameState, mover: Player, e: Edge) {
        if mover == Player::Enforcer {
            self.last_enforcer = Some(e);
        } else {
            self.last_enforcer = None;
        }
    }

    fn audit(&mut self, state: &GameState, level: AuditLevel) -> Vec<String> {
        let mut out = std::mem::take(&mut self.violations);
        if level == AuditLevel::Full && self.stage != PlanarityStage::Done {
            out.extend(self.structure_problems(state.avoider_edges()));
        }
        out
    }

    fn stats(&self) -> Vec<(String, String)> {
        let [a, b, c] = self.stage_moves;
        vec![
            ("stage1_moves".into(), a.to_string()),
            ("stage2_moves".into(), b.to_string()),
            ("stage3_moves".into(), c.to_string()),
            ("fallback_moves".into(), self.fallback_moves.to_string()),
            (
                "guarantee_round".into(),
                self.guarantee_round.map_or("none".into(), |r| r.to_string()),
            ),
        ]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
