use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

use super::normal_form::NormalFormGame;
use super::shape::GameShape;

/// Generator used for every seeded draw in the crate.
pub type GameRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every payoff iid uniform on `[0, 1)`, drawn player-major in profile order.
pub fn sample_random_game<T: Scalar>(shape: &GameShape, seed: u64) -> NormalFormGame<T> {
    let mut rng = rng_from_seed(seed);
    sample_random_game_with(shape, &mut rng)
}

pub fn sample_random_game_with<T: Scalar, R: Rng + ?Sized>(
    shape: &GameShape,
    rng: &mut R,
) -> NormalFormGame<T> {
    let payoffs = (0..shape.num_players())
        .map(|_| {
            (0..shape.total_profiles())
                .map(|_| T::of(rng.random::<f64>()))
                .collect()
        })
        .collect();
    NormalFormGame::new(shape.clone(), payoffs).expect("uniform draws are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let shape = GameShape::new(vec![3, 2]).unwrap();
        let a = sample_random_game::<f64>(&shape, 42);
        let b = sample_random_game::<f64>(&shape, 42);
        let c = sample_random_game::<f64>(&shape, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.all_payoffs().iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
    }
}
