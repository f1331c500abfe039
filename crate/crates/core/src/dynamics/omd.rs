use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{is_pure_ne, relative_loss_from_gradient, MixedProfile, NormalFormGame, PureProfile};
use crate::scalar::Scalar;

use super::prox::{perturb_interior, prox_map_in_place};

/// Floor applied to initial strategies before the first prox step.
pub const INTERIOR_FLOOR: f64 = 1e-12;

/// A converged run counts as reaching a pure equilibrium when no player puts
/// more than this much mass off its most likely action.
pub const PURE_IMPURITY_TOL: f64 = 1e-4;

/// Step size `eta0 * t^(-beta)` for `t = 1, 2, ...`, stop after `max_iters`
/// or once every player's relative loss is below `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OMDConfig {
    pub eta0: f64,
    pub beta: f64,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for OMDConfig {
    fn default() -> Self {
        Self::random_games()
    }
}

impl OMDConfig {
    /// `eta0 = 2^3`, `beta = 1/20`.
    pub fn random_games() -> Self {
        Self {
            eta0: 8.0,
            beta: 0.05,
            max_iters: 2000,
            tolerance: 1e-8,
        }
    }

    /// `eta0 = 2^8`, `beta = 1/20`.
    pub fn economic() -> Self {
        Self {
            eta0: 256.0,
            ..Self::random_games()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.into()));
        if !(self.eta0.is_finite() && self.eta0 > 0.0) {
            return bad("eta0 must be positive and finite");
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad("beta must lie in (0, 1]");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        Ok(())
    }

    pub fn step_size(&self, t: usize) -> f64 {
        self.eta0 * (t as f64).powf(-self.beta)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Trajectory<T> {
    /// Max relative loss fell below the tolerance.
    pub converged: bool,
    pub iterations_used: usize,
    #[serde(serialize_with = "serialize_profile")]
    pub final_profile: MixedProfile<T>,
    /// Max over players of the relative loss after each iteration.
    pub loss_history: Vec<T>,
    /// Set when the run converged onto a vertex that is a pure equilibrium.
    pub pure_equilibrium: Option<PureProfile>,
}

fn serialize_profile<T: Scalar, S: serde::Serializer>(
    p: &MixedProfile<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.num_players()))?;
    for x in p.strategies() {
        let v: Vec<f64> = x.iter().map(|v| v.to_f64_lossy()).collect();
        seq.serialize_element(&v)?;
    }
    seq.end()
}

impl<T: Scalar> Trajectory<T> {
    pub fn final_loss(&self) -> T {
        self.loss_history.last().copied().unwrap_or_else(T::infinity)
    }

    pub fn reached_pure_equilibrium(&self) -> bool {
        self.pure_equilibrium.is_some()
    }
}

/// Online mirror descent with the entropic prox map and full-information
/// gradients. All players update simultaneously; the loss is measured on the
/// updated profile.
pub fn run_omd<T: Scalar>(
    g: &NormalFormGame<T>,
    init: &MixedProfile<T>,
    cfg: &OMDConfig,
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    if !init.matches(g.shape()) {
        return Err(Error::InvalidProfile(
            "initial profile does not match the game shape".into(),
        ));
    }
    let n = g.num_players();
    let floor = T::of(INTERIOR_FLOOR);
    let mut strategies: Vec<Vec<T>> = init
        .strategies()
        .iter()
        .map(|x| perturb_interior(x, floor))
        .collect();
    let mut profile = MixedProfile::from_raw(strategies.clone());
    let mut grads = gradients_checked(g, &profile, 0)?;
    let mut loss_history = Vec::new();
    let tol = T::of(cfg.tolerance);
    let mut converged = false;
    let mut step = Vec::new();

    for t in 1..=cfg.max_iters {
        let eta = T::of(cfg.step_size(t));
        for i in 0..n {
            step.clear();
            step.extend(grads[i].iter().map(|&v| eta * v));
            if step.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteGradient {
                    player: i,
                    iteration: t,
                });
            }
            prox_map_in_place(&mut strategies[i], &step);
        }
        profile = MixedProfile::from_raw(strategies.clone());
        grads = gradients_checked(g, &profile, t)?;
        let loss = (0..n)
            .map(|i| relative_loss_from_gradient(&grads[i], &strategies[i]))
            .fold(T::neg_infinity(), T::max);
        loss_history.push(loss);
        if loss < tol {
            converged = true;
            break;
        }
    }

    let pure_equilibrium = if converged && profile.impurity() <= T::of(PURE_IMPURITY_TOL) {
        let candidate = profile.argmax_profile();
        is_pure_ne(g, &candidate).then_some(candidate)
    } else {
        None
    };
    Ok(Trajectory {
        converged,
        iterations_used: loss_history.len(),
        final_profile: profile,
        loss_history,
        pure_equilibrium,
    })
}

fn gradients_checked<T: Scalar>(
    g: &NormalFormGame<T>,
    s: &MixedProfile<T>,
    iteration: usize,
) -> Result<Vec<Vec<T>>> {
    let grads = g.payoff_gradients(s);
    for (player, v) in grads.iter().enumerate() {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteGradient { player, iteration });
        }
    }
    Ok(grads)
}
