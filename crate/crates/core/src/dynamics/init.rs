use rand::Rng;
use rand_distr::Exp1;

use crate::game::{rng_from_seed, GameShape, MixedProfile};
use crate::scalar::Scalar;

/// Every player mixes uniformly.
pub fn uniform_init<T: Scalar>(shape: &GameShape) -> MixedProfile<T> {
    MixedProfile::from_raw(
        shape
            .actions()
            .iter()
            .map(|&m| vec![T::one() / T::of_usize(m); m])
            .collect(),
    )
}

/// Uniform draw from each player's simplex (normalized exponential
/// variates).
pub fn random_init<T: Scalar>(shape: &GameShape, seed: u64) -> MixedProfile<T> {
    random_init_with(shape, &mut rng_from_seed(seed))
}

pub fn random_init_with<T: Scalar, R: Rng + ?Sized>(shape: &GameShape, rng: &mut R) -> MixedProfile<T> {
    MixedProfile::from_raw(
        shape
            .actions()
            .iter()
            .map(|&m| {
                let draws: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
                let total: f64 = draws.iter().sum();
                draws.into_iter().map(|d| T::of(d / total)).collect()
            })
            .collect(),
    )
}
