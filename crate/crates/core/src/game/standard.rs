//! Classic matrix games used as reference points.

use rand::Rng;

use crate::scalar::Scalar;

use super::normal_form::NormalFormGame;

fn bimatrix<T: Scalar>(row: &[&[f64]], col: &[&[f64]]) -> NormalFormGame<T> {
    let conv = |m: &[&[f64]]| -> Vec<Vec<T>> {
        m.iter().map(|r| r.iter().map(|&x| T::of(x)).collect()).collect()
    };
    NormalFormGame::bimatrix(&conv(row), &conv(col)).expect("static matrices are well formed")
}

/// Zero-sum matching pennies; the row player wants to match.
pub fn matching_pennies<T: Scalar>() -> NormalFormGame<T> {
    bimatrix(&[&[1.0, -1.0], &[-1.0, 1.0]], &[&[-1.0, 1.0], &[1.0, -1.0]])
}

/// Action 0 = cooperate, 1 = defect.
pub fn prisoners_dilemma<T: Scalar>() -> NormalFormGame<T> {
    bimatrix(&[&[-1.0, -3.0], &[0.0, -2.0]], &[&[-1.0, 0.0], &[-3.0, -2.0]])
}

pub fn battle_of_the_sexes<T: Scalar>() -> NormalFormGame<T> {
    bimatrix(&[&[2.0, 0.0], &[0.0, 1.0]], &[&[1.0, 0.0], &[0.0, 2.0]])
}

/// Cyclic 3x3 game: the row player scores on the diagonal, the column
/// player one column to the right of it.
pub fn shapley<T: Scalar>() -> NormalFormGame<T> {
    bimatrix(
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
        &[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]],
    )
}

/// Two-parameter matching-pennies family: the row player wants to match and
/// the column player to mismatch, with stakes set by `alpha, beta in (0, 1)`.
/// The unique equilibrium is fully mixed.
pub fn jordan<T: Scalar>(alpha: f64, beta: f64) -> NormalFormGame<T> {
    bimatrix(
        &[&[1.0 - alpha, 0.0], &[0.0, alpha]],
        &[&[0.0, 1.0 - beta], &[beta, 0.0]],
    )
}

/// Jordan game with parameters drawn uniformly from `(0, 1)`.
pub fn random_jordan<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, NormalFormGame<T>) {
    let alpha: f64 = rng.random();
    let beta: f64 = rng.random();
    (alpha, beta, jordan(alpha, beta))
}
