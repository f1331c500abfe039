//! Discretized auctions and contests.

mod games;
mod kinds;

pub use games::{bid_grid, build_econ_game, discretization_sweep, EconGameSpec, SweepRow};
pub use kinds::{allocation, AllocationOutcome, EconKind};
