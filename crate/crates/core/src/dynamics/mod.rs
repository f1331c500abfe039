//! Online mirror descent with entropic regularization.

mod init;
mod omd;
mod prox;

pub use init::{random_init, random_init_with, uniform_init};
pub use omd::{run_omd, OMDConfig, Trajectory, INTERIOR_FLOOR, PURE_IMPURITY_TOL};
pub use prox::{perturb_interior, prox_map, prox_map_in_place};
