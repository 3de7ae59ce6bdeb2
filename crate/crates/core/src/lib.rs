//! Engine, strategy library and verification harness for unbiased
//! Avoider-Enforcer games played on the edges of `K_n`.

pub mod error;
pub mod game;
pub mod harness;
pub mod props;
pub mod solver;
pub mod strategy;
pub mod transcript;

pub use error::{Error, Result};
pub use game::{
    avoider_loss_round, new_game, run_match, run_match_with, AuditLevel, Edge, GameState,
    MatchOptions, MatchResult, PlayMode, Player, Strategy,
};
pub use props::LosingProperty;
pub use transcript::{Move, Transcript, TranscriptHeader};
