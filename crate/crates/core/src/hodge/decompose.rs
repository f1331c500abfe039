use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::NormalFormGame;
use crate::scalar::{norm2, Scalar};

use super::graph::{check_shape, Flow};
use super::operators::DecompositionOperators;

/// Deviation flows with norm at most this fraction of the payoff norm are
/// treated as zero.
pub const NON_STRATEGIC_RTOL: f64 = 1e-12;

/// Potentialness, or the marker for games with no strategic content.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialnessOutcome<T> {
    Value(T),
    /// Zero deviation flow: every player is indifferent among own actions.
    NonStrategic,
}

impl<T: Scalar> PotentialnessOutcome<T> {
    pub fn value(&self) -> Option<T> {
        match *self {
            Self::Value(v) => Some(v),
            Self::NonStrategic => None,
        }
    }

    pub fn is_non_strategic(&self) -> bool {
        matches!(self, Self::NonStrategic)
    }
}

fn outcome_from_flows<T: Scalar>(
    deviation: &Flow<T>,
    potential: &Flow<T>,
    harmonic: &Flow<T>,
    payoff_norm: T,
) -> PotentialnessOutcome<T> {
    let dn = deviation.norm();
    if dn == T::zero() || dn <= T::of(NON_STRATEGIC_RTOL) * payoff_norm {
        return PotentialnessOutcome::NonStrategic;
    }
    let p = potential.norm();
    let h = harmonic.norm();
    PotentialnessOutcome::Value(p / (p + h))
}

fn payoff_norm<T: Scalar>(g: &NormalFormGame<T>) -> T {
    norm2(&g.stacked())
}

/// Potential, harmonic and non-strategic parts of a game's payoffs.
#[derive(Debug, Clone)]
pub struct PayoffComponents<T> {
    pub potential: NormalFormGame<T>,
    pub harmonic: NormalFormGame<T>,
    pub non_strategic: NormalFormGame<T>,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult<T> {
    pub deviation_flow: Flow<T>,
    pub potential_flow: Flow<T>,
    pub harmonic_flow: Flow<T>,
    pub potentialness: PotentialnessOutcome<T>,
    pub components: Option<PayoffComponents<T>>,
}

impl<T: Scalar> DecompositionResult<T> {
    /// Largest payoff-difference distance to the potential component,
    /// `|| Du - D uP ||`, which is the harmonic flow norm.
    pub fn distance_to_potential(&self) -> T {
        self.harmonic_flow.norm()
    }

    pub fn distance_to_harmonic(&self) -> T {
        self.potential_flow.norm()
    }
}

/// Flow-level split of `Du` into its potential and harmonic parts.
pub fn decompose_flows<T: Scalar>(
    ops: &DecompositionOperators<T>,
    g: &NormalFormGame<T>,
) -> Result<DecompositionResult<T>> {
    let deviation_flow = ops.deviation_flow(g)?;
    let potential_flow = ops.project_potential(&deviation_flow);
    let harmonic_flow = deviation_flow.sub(&potential_flow);
    let potentialness =
        outcome_from_flows(&deviation_flow, &potential_flow, &harmonic_flow, payoff_norm(g));
    Ok(DecompositionResult {
        deviation_flow,
        potential_flow,
        harmonic_flow,
        potentialness,
        components: None,
    })
}

pub fn potentialness<T: Scalar>(
    ops: &DecompositionOperators<T>,
    g: &NormalFormGame<T>,
) -> Result<PotentialnessOutcome<T>> {
    Ok(decompose_flows(ops, g)?.potentialness)
}

/// Full decomposition including payoff components.
///
/// `uN = u - D^+ D u`, `uP = D^+ f_P`, `uH = u - uN - uP`.
pub fn decompose_payoffs<T: Scalar>(
    ops: &DecompositionOperators<T>,
    g: &NormalFormGame<T>,
) -> Result<DecompositionResult<T>> {
    let mut result = decompose_flows(ops, g)?;
    let shape = g.shape().clone();
    let u = g.stacked();
    let normalized = ops.deviation_pinv_apply(&result.deviation_flow);
    let potential = ops.deviation_pinv_apply(&result.potential_flow);
    let non_strategic: Vec<T> = u.iter().zip(&normalized).map(|(&a, &b)| a - b).collect();
    let harmonic: Vec<T> = u
        .iter()
        .zip(&non_strategic)
        .zip(&potential)
        .map(|((&a, &n), &p)| a - n - p)
        .collect();
    if [&non_strategic, &potential, &harmonic]
        .iter()
        .any(|v| v.iter().any(|x| !x.is_finite()))
    {
        return Err(Error::Pseudoinverse(
            "payoff components are not finite".into(),
        ));
    }
    result.components = Some(PayoffComponents {
        potential: NormalFormGame::from_stacked(shape.clone(), &potential)?,
        harmonic: NormalFormGame::from_stacked(shape.clone(), &harmonic)?,
        non_strategic: NormalFormGame::from_stacked(shape, &non_strategic)?,
    });
    Ok(result)
}

/// `alpha * uP + (1 - alpha) * uH`.
pub fn alpha_blend<T: Scalar>(dec: &DecompositionResult<T>, alpha: f64) -> Result<NormalFormGame<T>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "blend weight must lie in [0, 1], got {alpha}"
        )));
    }
    let c = dec.components.as_ref().ok_or_else(|| {
        Error::InvalidParameter("blend needs a decomposition with payoff components".into())
    })?;
    c.potential
        .combine(T::of(alpha), &c.harmonic, T::of(1.0 - alpha))
}

/// `|| Du - Dv ||` for two games of the same shape.
pub fn flow_distance<T: Scalar>(
    ops: &DecompositionOperators<T>,
    a: &NormalFormGame<T>,
    b: &NormalFormGame<T>,
) -> Result<T> {
    check_shape(a.shape(), b.shape())?;
    Ok(ops.deviation_flow(a)?.sub(&ops.deviation_flow(b)?).norm())
}
