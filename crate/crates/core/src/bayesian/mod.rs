//! Finite Bayesian games over monotone strategies.

mod game;
mod monotone;

pub use game::{
    bayesian_potentialness_sweep, BayesSweepRow, BayesianGame, InducedGame, DEFAULT_BAYES_GRID,
};
pub use monotone::{enumerate_monotone_strategies, monotone_strategy_count, MonotoneStrategy};
