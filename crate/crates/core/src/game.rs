//! Board, referee and match loop for unbiased Avoider-Enforcer games on the
//! edge set of `K_n`.
//!
//! Avoider moves first, players alternate claiming one unclaimed edge per
//! turn, and the game ends when every edge is claimed. Avoider loses as soon
//! as his graph has the (monotone increasing) losing property.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::props::LosingProperty;
use crate::transcript::{Move, Transcript, TranscriptHeader};

/// An edge of `K_n` in canonical orientation `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Canonicalizes the endpoint order. Panics on a loop.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "K_n has no loops");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.u < self.v
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: usize) -> usize {
        debug_assert!(self.touches(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Avoider,
    Enforcer,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Avoider => Player::Enforcer,
            Player::Enforcer => Player::Avoider,
        }
    }

    pub fn code(self) -> char {
        match self {
            Player::Avoider => 'A',
            Player::Enforcer => 'E',
        }
    }

    pub fn from_code(c: &str) -> Option<Player> {
        match c {
            "A" => Some(Player::Avoider),
            "E" => Some(Player::Enforcer),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        match self {
            Player::Avoider => 0,
            Player::Enforcer => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Avoider => f.write_str("Avoider"),
            Player::Enforcer => f.write_str("Enforcer"),
        }
    }
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `e` in the lexicographic enumeration `(0,1), (0,2), …, (n-2,n-1)`.
pub fn edge_index(n: usize, e: Edge) -> usize {
    debug_assert!(e.u < e.v && e.v < n);
    e.u * (2 * n - e.u - 1) / 2 + (e.v - e.u - 1)
}

/// All edges of `K_n` in canonical (lexicographic) order.
pub fn all_edges(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(edge_count(n));
    for u in 0..n {
        for v in u + 1..n {
            out.push(Edge { u, v });
        }
    }
    out
}

/// Full position of a game in progress.
#[derive(Clone, Debug)]
pub struct GameState {
    n: usize,
    edges: Arc<[Edge]>,
    owner: Vec<Option<Player>>,
    avoider_edges: Vec<Edge>,
    enforcer_edges: Vec<Edge>,
    degree: [Vec<usize>; 2],
    next: Player,
    // every index below this is claimed
    first_open: usize,
}

pub fn new_game(n: usize) -> Result<GameState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a game needs at least 2 vertices, got n={n}"
        )));
    }
    let edges: Arc<[Edge]> = all_edges(n).into();
    Ok(GameState {
        n,
        owner: vec![None; edges.len()],
        edges,
        avoider_edges: Vec::new(),
        enforcer_edges: Vec::new(),
        degree: [vec![0; n], vec![0; n]],
        next: Player::Avoider,
        first_open: 0,
    })
}

impl GameState {
    /// Builds a position by alternately applying `avoider` and `enforcer`
    /// edges, Avoider first. Mostly useful for setting up test positions.
    pub fn from_claims(n: usize, avoider: &[Edge], enforcer: &[Edge]) -> Result<GameState> {
        if avoider.len() < enforcer.len() || avoider.len() > enforcer.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "claim counts {}/{} are not reachable with Avoider moving first",
                avoider.len(),
                enforcer.len()
            )));
        }
        let mut state = new_game(n)?;
        for (i, &a) in avoider.iter().enumerate() {
            state.apply_move(a)?;
            if let Some(&e) = enforcer.get(i) {
                state.apply_move(e)?;
            }
        }
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of completed Avoider moves.
    pub fn round(&self) -> usize {
        self.avoider_edges.len()
    }

    pub fn next_player(&self) -> Player {
        self.next
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn avoider_edges(&self) -> &[Edge] {
        &self.avoider_edges
    }

    pub fn enforcer_edges(&self) -> &[Edge] {
        &self.enforcer_edges
    }

    pub fn edges_of(&self, player: Player) -> &[Edge] {
        match player {
            Player::Avoider => &self.avoider_edges,
            Player::Enforcer => &self.enforcer_edges,
        }
    }

    pub fn claimed_count(&self) -> usize {
        self.avoider_edges.len() + self.enforcer_edges.len()
    }

    pub fn unclaimed_count(&self) -> usize {
        self.edges.len() - self.claimed_count()
    }

    pub fn is_over(&self) -> bool {
        self.unclaimed_count() == 0
    }

    pub fn index_of(&self, e: Edge) -> usize {
        edge_index(self.n, e)
    }

    pub fn edge_at(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn owner(&self, e: Edge) -> Option<Player> {
        self.owner[edge_index(self.n, e)]
    }

    pub fn owner_at(&self, index: usize) -> Option<Player> {
        self.owner[index]
    }

    pub fn is_unclaimed(&self, e: Edge) -> bool {
        self.owner(e).is_none()
    }

    /// Unclaimed edge between two distinct vertices given in any order.
    pub fn is_open(&self, a: usize, b: usize) -> bool {
        a != b && self.is_unclaimed(Edge::new(a, b))
    }

    pub fn degree(&self, player: Player, v: usize) -> usize {
        self.degree[player.slot()][v]
    }

    /// Every unclaimed edge, in canonical order.
    pub fn unclaimed(&self) -> impl Iterator<Item = Edge> + '_ {
        (self.first_open..self.edges.len())
            .filter(move |&i| self.owner[i].is_none())
            .map(move |i| self.edges[i])
    }

    pub fn legal_moves(&self) -> Vec<Edge> {
        self.unclaimed().collect()
    }

    /// The lexicographically least unclaimed edge.
    pub fn first_unclaimed(&self) -> Option<Edge> {
        self.unclaimed().next()
    }

    /// The lexicographically least unclaimed edge satisfying `pred`.
    pub fn first_unclaimed_where(&self, mut pred: impl FnMut(Edge) -> bool) -> Option<Edge> {
        self.unclaimed().find(|&e| pred(e))
    }

    pub fn validate_edge(&self, e: Edge) -> Result<()> {
        if !e.is_canonical() || e.v >= self.n {
            return Err(Error::InvalidEdge {
                u: e.u,
                v: e.v,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Claims `edge` for the player to move.
    pub fn apply_move(&mut self, edge: Edge) -> Result<()> {
        self.validate_edge(edge)?;
        let idx = edge_index(self.n, edge);
        let player = self.next;
        if self.owner[idx].is_some() {
            return Err(Error::IllegalMove { player, edge });
        }
        self.owner[idx] = Some(player);
        match player {
            Player::Avoider => self.avoider_edges.push(edge),
            Player::Enforcer => self.enforcer_edges.push(edge),
        }
        self.degree[player.slot()][edge.u] += 1;
        self.degree[player.slot()][edge.v] += 1;
        while self.first_open < self.owner.len() && self.owner[self.first_open].is_some() {
            self.first_open += 1;
        }
        self.next = player.opponent();
        Ok(())
    }

    /// Like [`GameState::apply_move`] but for a known mover; rejects moves out of turn.
    pub fn apply_move_as(&mut self, player: Player, edge: Edge) -> Result<()> {
        if player != self.next {
            return Err(Error::WrongTurn(player));
        }
        self.apply_move(edge)
    }

    /// Claims `edge` for `player` whatever the turn order, then hands the turn
    /// to the opponent. For building test positions.
    pub fn force_claim(&mut self, player: Player, edge: Edge) -> Result<()> {
        self.next = player;
        self.apply_move(edge)
    }

    /// Functional form of [`GameState::apply_move`].
    pub fn with_move(&self, edge: Edge) -> Result<GameState> {
        let mut next = self.clone();
        next.apply_move(edge)?;
        Ok(next)
    }

    /// Re-derives the position invariants from scratch and lists any breach.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        let a = self.avoider_edges.len();
        let e = self.enforcer_edges.len();
        if a < e || a > e + 1 {
            out.push(format!("claim counts out of balance: |A|={a}, |E|={e}"));
        }
        let expected_next = if a == e {
            Player::Avoider
        } else {
            Player::Enforcer
        };
        if self.next != expected_next {
            out.push(format!("{} to move with |A|={a}, |E|={e}", self.next));
        }
        let mut seen = vec![None; self.owner.len()];
        for (player, list) in [
            (Player::Avoider, &self.avoider_edges),
            (Player::Enforcer, &self.enforcer_edges),
        ] {
            for &edge in list.iter() {
                if !edge.is_canonical() || edge.v >= self.n {
                    out.push(format!("{player} holds non-canonical edge {edge}"));
                    continue;
                }
                let idx = edge_index(self.n, edge);
                if let Some(prev) = seen[idx] {
                    out.push(format!("edge {edge} claimed by {prev} and {player}"));
                }
                seen[idx] = Some(player);
            }
        }
        if seen != self.owner {
            out.push("ownership table disagrees with claim lists".to_string());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PlayMode {
    /// Halt as soon as Avoider's graph has the losing property.
    #[default]
    StopAtLoss,
    /// Keep playing until the board is exhausted.
    PlayOut,
}

impl PlayMode {
    pub fn id(self) -> &'static str {
        match self {
            PlayMode::StopAtLoss => "stop_at_loss",
            PlayMode::PlayOut => "play_out",
        }
    }

    pub fn from_id(s: &str) -> Option<PlayMode> {
        match s {
            "stop_at_loss" => Some(PlayMode::StopAtLoss),
            "play_out" => Some(PlayMode::PlayOut),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum AuditLevel {
    None,
    /// Cheap in-play invariants plus from-scratch checks at the loss round and at the end.
    #[default]
    Checkpoints,
    /// From-scratch checks after every move.
    Full,
}

impl AuditLevel {
    pub fn id(self) -> &'static str {
        match self {
            AuditLevel::None => "none",
            AuditLevel::Checkpoints => "checkpoints",
            AuditLevel::Full => "full",
        }
    }

    pub fn from_id(s: &str) -> Option<AuditLevel> {
        match s {
            "none" => Some(AuditLevel::None),
            "checkpoints" => Some(AuditLevel::Checkpoints),
            "full" => Some(AuditLevel::Full),
            _ => None,
        }
    }
}

/// A decision procedure with private per-match memory.
///
/// The referee calls [`Strategy::start`] once per match, [`Strategy::choose`]
/// on the strategy's own turns, and [`Strategy::observe`] after every move of
/// either player (the state passed in already contains the move).
pub trait Strategy: Send {
    fn name(&self) -> String;

    /// Resets memory for a fresh match on `K_n`.
    fn start(&mut self, n: usize, side: Player, seed: u64);

    /// Must return an unclaimed edge whenever one exists.
    fn choose(&mut self, state: &GameState) -> Edge;

    fn observe(&mut self, _state: &GameState, _mover: Player, _edge: Edge) {}

    /// Invariant breaches detected since the previous call. Expensive
    /// re-derivations should only run at [`AuditLevel::Full`].
    fn audit(&mut self, _state: &GameState, _level: AuditLevel) -> Vec<String> {
        Vec::new()
    }

    /// Free-form counters reported alongside match results.
    fn stats(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn clone_box(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub round: usize,
    pub source: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyFault {
    pub player: Player,
    pub round: usize,
    pub edge: Edge,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub transcript: Transcript,
    pub loss_round: Option<usize>,
    pub invariant_violations: Vec<Violation>,
    pub final_state: GameState,
    pub fault: Option<StrategyFault>,
    pub avoider_stats: Vec<(String, String)>,
    pub enforcer_stats: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct MatchOptions {
    pub mode: PlayMode,
    pub seed: u64,
    pub audit: AuditLevel,
}

impl MatchOptions {
    pub fn new(mode: PlayMode, seed: u64) -> Self {
        MatchOptions {
            mode,
            seed,
            audit: AuditLevel::Checkpoints,
        }
    }

    pub fn with_audit(mut self, audit: AuditLevel) -> Self {
        self.audit = audit;
        self
    }
}

/// SplitMix64 step, used to give each player an independent stream.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_match(
    n: usize,
    avoider: &mut dyn Strategy,
    enforcer: &mut dyn Strategy,
    property: LosingProperty,
    mode: PlayMode,
    seed: u64,
) -> Result<MatchResult> {
    run_match_with(n, avoider, enforcer, property, &MatchOptions::new(mode, seed))
}

pub fn run_match_with(
    n: usize,
    avoider: &mut dyn Strategy,
    enforcer: &mut dyn Strategy,
    property: LosingProperty,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    let mut state = new_game(n)?;
    let header = TranscriptHeader {
        n,
        property,
        avoider: avoider.name(),
        enforcer: enforcer.name(),
        seed: opts.seed,
    };
    avoider.start(n, Player::Avoider, derive_seed(opts.seed, 1));
    enforcer.start(n, Player::Enforcer, derive_seed(opts.seed, 2));

    let mut tracker = property.tracker(n);
    let mut moves = Vec::new();
    let mut violations = Vec::new();
    let mut loss_round = None;
    let mut fault = None;
    // last from-scratch verdict, for the monotonicity audit
    let mut held_from_scratch = false;

    while !state.is_over() {
        let player = state.next_player();
        let chosen = match player {
            Player::Avoider => avoider.choose(&state),
            Player::Enforcer => enforcer.choose(&state),
        };
        let round = if player == Player::Avoider {
            state.round() + 1
        } else {
            state.round()
        };
        if let Err(err) = state.apply_move(chosen) {
            fault = Some(StrategyFault {
                player,
                round,
                edge: chosen,
                reason: err.to_string(),
            });
            break;
        }
        moves.push(Move {
            round,
            player,
            edge: chosen,
        });
        avoider.observe(&state, player, chosen);
        enforcer.observe(&state, player, chosen);

        let mut just_lost = false;
        if player == Player::Avoider {
            let holds = tracker.add_edge(chosen);
            if holds && loss_round.is_none() {
                loss_round = Some(round);
                just_lost = true;
            }
            if opts.audit == AuditLevel::Full || (just_lost && opts.audit > AuditLevel::None) {
                let scratch = property.check(n, state.avoider_edges());
                if scratch != holds {
                    violations.push(Violation {
                        round,
                        source: "referee".into(),
                        detail: format!(
                            "incremental tracker says {holds}, recomputation says {scratch}"
                        ),
                    });
                }
                if held_from_scratch && !scratch {
                    violations.push(Violation {
                        round,
                        source: "referee".into(),
                        detail: format!("{} stopped holding after it held", property.id()),
                    });
                }
                held_from_scratch = scratch;
            }
        }

        if opts.audit > AuditLevel::None {
            if opts.audit == AuditLevel::Full {
                for detail in state.check_invariants() {
                    violations.push(Violation {
                        round,
                        source: "referee".into(),
                        detail,
                    });
                }
            }
            for (who, strat) in [
                ("avoider", &mut *avoider as &mut dyn Strategy),
                ("enforcer", &mut *enforcer as &mut dyn Strategy),
            ] {
                for detail in strat.audit(&state, opts.audit) {
                    violations.push(Violation {
                        round,
                        source: who.into(),
                        detail,
                    });
                }
            }
        }

        if just_lost && opts.mode == PlayMode::StopAtLoss {
            break;
        }
    }

    if opts.audit > AuditLevel::None {
        for detail in state.check_invariants() {
            violations.push(Violation {
                round: state.round(),
                source: "referee".into(),
                detail,
            });
        }
        if loss_round.is_some() && !property.check(n, state.avoider_edges()) {
            violations.push(Violation {
                round: state.round(),
                source: "referee".into(),
                detail: format!("{} does not hold at the end of a lost match", property.id()),
            });
        }
    }

    Ok(MatchResult {
        transcript: Transcript { header, moves },
        loss_round,
        invariant_violations: violations,
        final_state: state,
        fault,
        avoider_stats: avoider.stats(),
        enforcer_stats: enforcer.stats(),
    })
}

/// Replays `transcript` and returns the round in which Avoider's graph first
/// has `property`.
pub fn avoider_loss_round(transcript: &Transcript, property: LosingProperty) -> Result<Option<usize>> {
    Ok(replay(transcript, property)?.1)
}

/// Replays a transcript, checking move legality and round numbering.
pub fn replay(transcript: &Transcript, property: LosingProperty) -> Result<(GameState, Option<usize>)> {
    let n = transcript.header.n;
    let mut state = new_game(n).map_err(|e| Error::Replay {
        index: 0,
        reason: e.to_string(),
    })?;
    let mut tracker = property.tracker(n);
    let mut loss = None;
    for (index, mv) in transcript.moves.iter().enumerate() {
        let expected_round = match mv.player {
            Player::Avoider => state.round() + 1,
            Player::Enforcer => state.round(),
        };
        if mv.round != expected_round {
            return Err(Error::Replay {
                index,
                reason: format!("round {} where {expected_round} was expected", mv.round),
            });
        }
        state
            .apply_move_as(mv.player, mv.edge)
            .map_err(|e| Error::Replay {
                index,
                reason: e.to_string(),
            })?;
        if mv.player == Player::Avoider && tracker.add_edge(mv.edge) && loss.is_none() {
            loss = Some(mv.round);
        }
    }
    Ok((state, loss))
}
