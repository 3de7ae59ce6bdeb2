//! Avoider and Enforcer strategies, plus generic adversaries used as
//! opponents.
//!
//! Strategy ids (used in transcripts, configs and the CLI):
//!
//! | id | side |
//! |----|------|
//! | `planarity_avoider` | Avoider |
//! | `bibunch_avoider` | Avoider |
//! | `isolated_vertex_avoider[:<epsilon>]` | Avoider |
//! | `extremal_avoider:<property>[:random]` | Avoider |
//! | `odd_cycle_enforcer[:random]` | Enforcer |
//! | `connectivity_enforcer[:random]` | Enforcer |
//! | `adversary:random`, `adversary:lex` | either |
//! | `adversary:greedy:<target>` | depends on target |

mod adversary;
mod bibunch;
mod connectivity;
mod extremal;
mod isolated;
mod odd_cycle;
mod planarity;

pub use adversary::{Adversary, AdversaryKind, GreedyTarget};
pub use bibunch::{BiBunch, BiBunchAvoider};
pub use connectivity::ConnectivityEnforcer;
pub use extremal::ExtremalAvoider;
pub use isolated::{IsolatedVertexAvoider, JoinCase, DEFAULT_EPSILON};
pub use odd_cycle::OddCycleEnforcer;
pub use planarity::{PlanarityAvoider, PlanarityLayout, PlanarityStage};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Edge, Player, Strategy};
use crate::props::LosingProperty;

/// How a strategy resolves "claim an arbitrary edge" among several candidates.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// Lexicographically least candidate.
    Lex,
    /// Uniform among candidates, from a per-match seeded stream.
    Random(ChaCha8Rng),
}

impl TieBreak {
    pub fn random() -> Self {
        TieBreak::Random(ChaCha8Rng::seed_from_u64(0))
    }

    pub fn reseed(&mut self, seed: u64) {
        if let TieBreak::Random(rng) = self {
            *rng = ChaCha8Rng::seed_from_u64(seed);
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, TieBreak::Random(_))
    }

    /// Picks one candidate; candidates are assumed to arrive in canonical order.
    pub fn pick(&mut self, candidates: impl Iterator<Item = Edge>) -> Option<Edge> {
        match self {
            TieBreak::Lex => candidates.into_iter().next(),
            TieBreak::Random(rng) => {
                let mut chosen = None;
                for (seen, e) in candidates.enumerate() {
                    if rng.gen_range(0..=seen) == 0 {
                        chosen = Some(e);
                    }
                }
                chosen
            }
        }
    }
}

/// Which side a strategy id plays, or `None` for side-agnostic adversaries.
pub fn strategy_side(id: &str) -> Result<Option<Player>> {
    Ok(build(id)?.1)
}

/// Builds the strategy named `id` for `side`.
pub fn build_strategy(id: &str, side: Player) -> Result<Box<dyn Strategy>> {
    let (strategy, role) = build(id)?;
    match role {
        Some(r) if r != side => Err(Error::Config(format!(
            "strategy `{id}` plays {r}, not {side}"
        ))),
        _ => Ok(strategy),
    }
}

fn build(id: &str) -> Result<(Box<dyn Strategy>, Option<Player>)> {
    let parts: Vec<&str> = id.split(':').collect();
    let unknown = || Error::Config(format!("unknown strategy id `{id}`"));
    let tie = |rest: &[&str]| -> Result<TieBreak> {
        match rest {
            [] => Ok(TieBreak::Lex),
            ["random"] => Ok(TieBreak::random()),
            _ => Err(unknown()),
        }
    };
    let out: (Box<dyn Strategy>, Option<Player>) = match parts.as_slice() {
        ["planarity_avoider"] => (Box::new(PlanarityAvoider::new()), Some(Player::Avoider)),
        ["bibunch_avoider"] => (Box::new(BiBunchAvoider::new()), Some(Player::Avoider)),
        ["isolated_vertex_avoider"] => (
            Box::new(IsolatedVertexAvoider::new(DEFAULT_EPSILON)),
            Some(Player::Avoider),
        ),
        ["isolated_vertex_avoider", eps] => {
            let eps: f64 = eps.parse().map_err(|_| unknown())?;
            if !(eps > 0.0 && eps < 0.25) {
                return Err(Error::Config(format!("epsilon must lie in (0, 1/4), got {eps}")));
            }
            (Box::new(IsolatedVertexAvoider::new(eps)), Some(Player::Avoider))
        }
        ["extremal_avoider", prop, rest @ ..] => {
            let property = LosingProperty::from_id(prop).ok_or_else(unknown)?;
            (
                Box::new(ExtremalAvoider::with_tie_break(property, tie(rest)?)),
                Some(Player::Avoider),
            )
        }
        ["odd_cycle_enforcer", rest @ ..] => (
            Box::new(OddCycleEnforcer::with_tie_break(tie(rest)?)),
            Some(Player::Enforcer),
        ),
        ["connectivity_enforcer", rest @ ..] => (
            Box::new(ConnectivityEnforcer::with_tie_break(tie(rest)?)),
            Some(Player::Enforcer),
        ),
        ["adversary", "random"] => (Box::new(Adversary::random()), None),
        ["adversary", "lex"] => (Box::new(Adversary::lex()), None),
        ["adversary", "greedy", target] => {
            let target = GreedyTarget::from_id(target).ok_or_else(unknown)?;
            (Box::new(Adversary::greedy(target)), Some(target.side()))
        }
        _ => return Err(unknown()),
    };
    Ok(out)
}
