//! Potential/harmonic decomposition of finite normal-form games, the
//! potentialness metric, online mirror descent, and the experiment harness
//! built on them.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`.

pub mod bayesian;
pub mod dynamics;
pub mod econ;
pub mod error;
pub mod game;
pub mod harness;
pub mod hodge;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Game = game::NormalFormGame<f64>;
pub type Mixed = game::MixedProfile<f64>;
pub type Operators = hodge::DecompositionOperators<f64>;
pub type Decomposition = hodge::DecompositionResult<f64>;
pub type Run = dynamics::Trajectory<f64>;
