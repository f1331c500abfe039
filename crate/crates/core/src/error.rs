use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game shape: {0}")]
    InvalidShape(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid payoffs: {0}")]
    InvalidPayoffs(String),

    #[error("shape mismatch: operators built for {expected}, game has {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("shape {shape} exceeds the supported ceiling: {reason}")]
    ShapeTooLarge { shape: String, reason: String },

    #[error("pseudo-inverse failed: {0}")]
    Pseudoinverse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite payoff gradient for player {player} at iteration {iteration}")]
    NonFiniteGradient { player: usize, iteration: usize },

    #[error("strategy count overflow: C({n}, {k}) does not fit")]
    CountOverflow { n: usize, k: usize },

    #[error("cache file {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
