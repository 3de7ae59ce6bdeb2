use thiserror::Error;

use crate::game::{Edge, Player};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("illegal move: {player} tried to claim {edge}, which is already claimed")]
    IllegalMove { player: Player, edge: Edge },

    #[error("invalid edge {u}-{v} on K_{n}")]
    InvalidEdge { u: usize, v: usize, n: usize },

    #[error("wrong turn: {0} is not to move")]
    WrongTurn(Player),

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("replay error at move {index}: {reason}")]
    Replay { index: usize, reason: String },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
