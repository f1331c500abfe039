//! Finite normal-form games: shapes, payoffs, equilibria, and sampling.

mod equilibrium;
mod json;
mod normal_form;
mod sampling;
mod shape;
pub mod standard;

pub use equilibrium::{
    has_strict_pure_ne, is_pure_ne, profile_status, pure_equilibria, strictly_improves,
    EquilibriumReport, ProfileStatus, TIE_TOLERANCE,
};
pub use json::GameJson;
pub use normal_form::{
    relative_loss_from_gradient, MixedProfile, NormalFormGame, LOSS_RATIO_FLOOR,
};
pub use sampling::{rng_from_seed, sample_random_game, sample_random_game_with, GameRng};
pub use shape::{GameShape, PureProfile, MAX_PLAYERS};
