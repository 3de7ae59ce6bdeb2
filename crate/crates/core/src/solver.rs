//! Exact game values on tiny boards by memoised minimax.
//!
//! A position is packed as a base-3 number over the edges of `K_n` (0 open,
//! 1 Avoider, 2 Enforcer) plus a side-to-move bit, and that packed key indexes
//! the memo table directly.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{all_edges, edge_count, new_game, Edge, GameState, Player, Strategy};
use crate::props::{brute_force_extremal, LosingProperty};

/// Largest board [`solve_tau_e`] accepts.
pub const MAX_SOLVER_N: usize = 6;
/// Largest board [`exhaustive_strategy_audit`] accepts.
pub const MAX_AUDIT_N: usize = 5;

const UNKNOWN: u8 = 0;
const INFINITE: u8 = u8::MAX;

/// Round of Avoider's first loss, or `Infinite` if he never loses. Ordered by
/// how good it is for Avoider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GameValue {
    Finite(usize),
    Infinite,
}

impl GameValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            GameValue::Finite(r) => Some(r),
            GameValue::Infinite => None,
        }
    }

    fn decode(code: u8) -> GameValue {
        debug_assert_ne!(code, UNKNOWN);
        if code == INFINITE {
            GameValue::Infinite
        } else {
            GameValue::Finite(code as usize)
        }
    }
}

impl fmt::Display for GameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameValue::Finite(r) => write!(f, "{r}"),
            GameValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Packed position: base-3 digits per edge, then the side-to-move bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositionKey(pub u64);

impl PositionKey {
    pub fn of(avoider: u32, enforcer: u32, m: usize, to_move: Player) -> PositionKey {
        let mut digits = 0u64;
        for i in (0..m).rev() {
            let d = if avoider >> i & 1 == 1 {
                1
            } else if enforcer >> i & 1 == 1 {
                2
            } else {
                0
            };
            digits = digits * 3 + d;
        }
        PositionKey(digits * 2 + u64::from(to_move == Player::Enforcer))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverResult {
    pub n: usize,
    pub property: LosingProperty,
    pub tau_e: GameValue,
    /// Avoider first moves that achieve `tau_e`.
    pub optimal_openings: Vec<Edge>,
    pub positions: usize,
}

struct Solver {
    m: usize,
    pow3: Vec<u64>,
    losing: Vec<bool>,
    memo: Vec<u8>,
    positions: usize,
    order: Vec<usize>,
}

impl Solver {
    fn new(n: usize, property: LosingProperty, order: Vec<usize>) -> Solver {
        let edges = all_edges(n);
        let m = edges.len();
        let losing = (0..1u32 << m)
            .map(|mask| {
                let chosen: Vec<Edge> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
                property.check(n, &chosen)
            })
            .collect();
        let pow3: Vec<u64> = (0..=m).map(|i| 3u64.pow(i as u32)).collect();
        Solver {
            m,
            memo: vec![UNKNOWN; (pow3[m] * 2) as usize],
            pow3,
            losing,
            positions: 0,
            order,
        }
    }

    /// Value of the position; `digits` is the base-3 part of its key.
    fn value(&mut self, a: u32, e: u32, digits: u64) -> u8 {
        let avoider_turn = a.count_ones() == e.count_ones();
        let key = (digits * 2 + u64::from(!avoider_turn)) as usize;
        if self.memo[key] != UNKNOWN {
            return self.memo[key];
        }
        self.positions += 1;
        let free = !(a | e) & ((1u32 << self.m) - 1);
        let result = if free == 0 {
            INFINITE
        } else if avoider_turn {
            let round = a.count_ones() as u8 + 1;
            let mut best = 0u8;
            for k in 0..self.order.len() {
                let i = self.order[k];
                if free >> i & 1 == 0 {
                    continue;
                }
                let na = a | 1 << i;
                let v = if self.losing[na as usize] {
                    round
                } else {
                    self.value(na, e, digits + self.pow3[i])
                };
                best = best.max(v);
                if best == INFINITE {
                    break;
                }
            }
            best
        } else {
            // Avoider cannot lose before his next move
            let floor = a.count_ones() as u8 + 1;
            let mut best = INFINITE;
            for k in 0..self.order.len() {
                let i = self.order[k];
                if free >> i & 1 == 0 {
                    continue;
                }
                let v = self.value(a, e | 1 << i, digits + 2 * self.pow3[i]);
                best = best.min(v);
                if best == floor {
                    break;
                }
            }
            best
        };
        self.memo[key] = result;
        result
    }
}

fn check_solver_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} is below 2")));
    }
    if n > MAX_SOLVER_N {
        return Err(Error::CapacityExceeded(format!(
            "exhaustive solving is limited to n <= {MAX_SOLVER_N}, got {n}"
        )));
    }
    Ok(())
}

/// `τ_E(F)` on `K_n` under optimal play from both sides.
pub fn solve_tau_e(n: usize, property: LosingProperty) -> Result<SolverResult> {
    solve_with_order(n, property, (0..edge_count(n)).collect())
}

/// As [`solve_tau_e`], trying moves in the given edge-index order.
pub fn solve_with_order(n: usize, property: LosingProperty, order: Vec<usize>) -> Result<SolverResult> {
    check_solver_n(n)?;
    let m = edge_count(n);
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(Error::InvalidParameter("move order must permute the edge indices".into()));
    }
    let mut solver = Solver::new(n, property, order);
    let root = solver.value(0, 0, 0);
    let edges = all_edges(n);
    let mut openings = Vec::new();
    for (i, &edge) in edges.iter().enumerate() {
        let v = if solver.losing[1 << i] {
            1
        } else {
            solver.value(1 << i, 0, solver.pow3[i])
        };
        if v == root {
            openings.push(edge);
        }
    }
    Ok(SolverResult {
        n,
        property,
        tau_e: GameValue::decode(root),
        optimal_openings: openings,
        positions: solver.positions,
    })
}

/// Value of an arbitrary reachable position in which Avoider has not lost yet.
pub fn solve_position(state: &GameState, property: LosingProperty) -> Result<GameValue> {
    let n = state.n();
    check_solver_n(n)?;
    if property.check(n, state.avoider_edges()) {
        return Err(Error::InvalidParameter("Avoider has already lost in this position".into()));
    }
    let mask = |edges: &[Edge]| edges.iter().fold(0u32, |acc, &e| acc | 1 << state.index_of(e));
    let (a, e) = (mask(state.avoider_edges()), mask(state.enforcer_edges()));
    let mut solver = Solver::new(n, property, (0..edge_count(n)).collect());
    let digits = PositionKey::of(a, e, solver.m, Player::Avoider).0 / 2;
    Ok(GameValue::decode(solver.value(a, e, digits)))
}

/// Both sides of the sandwich `⌈ex/2⌉ + 1 ≤ τ_E ≤ ex + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation1Report {
    pub n: usize,
    pub property: LosingProperty,
    pub tau_e: GameValue,
    pub ex: usize,
    pub lower: usize,
    pub upper: usize,
    pub pass: bool,
}

impl fmt::Display for Observation1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tau_e={} ex={} sandwich={}..{} pass={}",
            self.tau_e, self.ex, self.lower, self.upper, self.pass
        )
    }
}

pub fn verify_observation1(n: usize, property: LosingProperty) -> Result<Observation1Report> {
    let solved = solve_tau_e(n, property)?;
    let ex = brute_force_extremal(property, n)?;
    let lower = ex.div_ceil(2) + 1;
    let upper = ex + 1;
    let pass = match solved.tau_e {
        GameValue::Finite(t) => lower <= t && t <= upper,
        GameValue::Infinite => edge_count(n).div_ceil(2) <= ex,
    };
    Ok(Observation1Report {
        n,
        property,
        tau_e: solved.tau_e,
        ex,
        lower,
        upper,
        pass,
    })
}

/// Worst case of a fixed strategy over every opponent line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyAudit {
    /// Minimum loss round for an Avoider strategy, maximum for an Enforcer one.
    pub worst: GameValue,
    /// A full move sequence realising `worst`.
    pub worst_line: Vec<Edge>,
    pub leaves: usize,
}

/// Plays `strategy` (as `side`) against every possible opponent on `K_n`.
pub fn exhaustive_strategy_audit(
    n: usize,
    strategy: &dyn Strategy,
    side: Player,
    property: LosingProperty,
) -> Result<StrategyAudit> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n} is below 2")));
    }
    if n > MAX_AUDIT_N {
        return Err(Error::CapacityExceeded(format!(
            "exhaustive strategy audits are limited to n <= {MAX_AUDIT_N}, got {n}"
        )));
    }
    let mut strat = strategy.clone_box();
    strat.start(n, side, 0);
    let mut audit = StrategyAudit {
        worst: if side == Player::Avoider { GameValue::Infinite } else { GameValue::Finite(0) },
        worst_line: Vec::new(),
        leaves: 0,
    };
    let mut line = Vec::new();
    explore(&new_game(n)?, strat, side, property, &mut line, &mut audit)?;
    Ok(audit)
}

fn explore(
    state: &GameState,
    mut strat: Box<dyn Strategy>,
    side: Player,
    property: LosingProperty,
    line: &mut Vec<Edge>,
    audit: &mut StrategyAudit,
) -> Result<()> {
    let leaf = |value: GameValue, line: &[Edge], audit: &mut StrategyAudit| {
        audit.leaves += 1;
        let worse = match side {
            Player::Avoider => value < audit.worst,
            Player::Enforcer => value > audit.worst,
        };
        if worse || audit.leaves == 1 {
            audit.worst = value;
            audit.worst_line = line.to_vec();
        }
    };
    if state.is_over() {
        leaf(GameValue::Infinite, line, audit);
        return Ok(());
    }
    let mover = state.next_player();
    let step = |e: Edge, mut strat: Box<dyn Strategy>, line: &mut Vec<Edge>, audit: &mut StrategyAudit| -> Result<()> {
        let mut next = state.clone();
        next.apply_move(e).map_err(|_| Error::IllegalMove { player: mover, edge: e })?;
        strat.observe(&next, mover, e);
        line.push(e);
        if mover == Player::Avoider && property.check(next.n(), next.avoider_edges()) {
            leaf(GameValue::Finite(next.round()), line, audit);
        } else {
            explore(&next, strat, side, property, line, audit)?;
        }
        line.pop();
        Ok(())
    };
    if mover == side {
        let e = strat.choose(state);
        step(e, strat, line, audit)
    } else {
        for e in state.legal_moves() {
            step(e, strat.clone_box(), line, audit)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_values() {
        assert_eq!(solve_tau_e(3, LosingProperty::MinDegreeOne).unwrap().tau_e, GameValue::Finite(2));
        assert_eq!(solve_tau_e(3, LosingProperty::NonPlanar).unwrap().tau_e, GameValue::Infinite);
        let t = solve_tau_e(4, LosingProperty::ConnectedSpanning).unwrap().tau_e;
        assert!(matches!(t, GameValue::Finite(3) | GameValue::Finite(4)), "{t}");
    }

    #[test]
    fn ordering_and_display() {
        assert!(GameValue::Infinite > GameValue::Finite(100));
        assert!(GameValue::Finite(3) < GameValue::Finite(4));
        assert_eq!(GameValue::Infinite.to_string(), "inf");
    }

    #[test]
    fn capacity_limits() {
        assert!(matches!(solve_tau_e(7, LosingProperty::NonPlanar), Err(Error::CapacityExceeded(_))));
        let s = crate::strategy::build_strategy("adversary:lex", Player::Avoider).unwrap();
        assert!(matches!(
            exhaustive_strategy_audit(6, s.as_ref(), Player::Avoider, LosingProperty::NonPlanar),
            Err(Error::CapacityExceeded(_))
        ));
    }

    #[test]
    fn key_packs_digits_and_turn() {
        // edge 0 Avoider, edge 1 Enforcer: 1 + 2*3 = 7
        assert_eq!(PositionKey::of(0b01, 0b10, 3, Player::Avoider), PositionKey(14));
        assert_eq!(PositionKey::of(0b01, 0, 3, Player::Enforcer), PositionKey(3));
    }

    #[test]
    fn observation1_examples() {
        let r = verify_observation1(3, LosingProperty::NonPlanar).unwrap();
        assert_eq!((r.tau_e, r.ex, r.pass), (GameValue::Infinite, 3, true));
        let r = verify_observation1(4, LosingProperty::MinDegreeOne).unwrap();
        assert_eq!(r.ex, 3);
        assert!(r.pass);
        let r = verify_observation1(5, LosingProperty::NonBipartite).unwrap();
        assert_eq!((r.ex, r.lower, r.upper), (6, 4, 7));
    }
}
