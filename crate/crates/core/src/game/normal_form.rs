use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

use super::shape::{GameShape, PureProfile};

/// Best-response values at or below this magnitude switch the relative
/// utility loss to its absolute form.
pub const LOSS_RATIO_FLOOR: f64 = 1e-12;

/// Payoff field of a finite game: one flat vector per player, indexed by
/// profile index.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormGame<T> {
    shape: GameShape,
    payoffs: Vec<Vec<T>>,
}

impl<T: Scalar> NormalFormGame<T> {
    pub fn new(shape: GameShape, payoffs: Vec<Vec<T>>) -> Result<Self> {
        if payoffs.len() != shape.num_players() {
            return Err(Error::InvalidPayoffs(format!(
                "{} payoff vectors for {} players",
                payoffs.len(),
                shape.num_players()
            )));
        }
        for (i, u) in payoffs.iter().enumerate() {
            if u.len() != shape.total_profiles() {
                return Err(Error::InvalidPayoffs(format!(
                    "player {i} has {} payoffs, expected {}",
                    u.len(),
                    shape.total_profiles()
                )));
            }
            if let Some(k) = u.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidPayoffs(format!(
                    "player {i} payoff at profile {k} is not finite"
                )));
            }
        }
        Ok(Self { shape, payoffs })
    }

    /// Game with every payoff equal to zero.
    pub fn zeros(shape: GameShape) -> Self {
        let payoffs = vec![vec![T::zero(); shape.total_profiles()]; shape.num_players()];
        Self { shape, payoffs }
    }

    /// Two-player game from row-major matrices; rows are player 0's actions.
    pub fn bimatrix(row: &[Vec<T>], col: &[Vec<T>]) -> Result<Self> {
        let m = row.len();
        let n = row.first().map_or(0, Vec::len);
        if col.len() != m || row.iter().chain(col).any(|r| r.len() != n) {
            return Err(Error::InvalidPayoffs(
                "bimatrix payoffs must be two matrices of equal shape".into(),
            ));
        }
        let shape = GameShape::new(vec![m, n])?;
        let flatten = |mat: &[Vec<T>]| mat.iter().flatten().copied().collect::<Vec<_>>();
        Self::new(shape, vec![flatten(row), flatten(col)])
    }

    /// Build by evaluating `f(player, profile_index)` everywhere.
    pub fn from_fn(shape: GameShape, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let payoffs = (0..shape.num_players())
            .map(|i| (0..shape.total_profiles()).map(|a| f(i, a)).collect())
            .collect();
        Self::new(shape, payoffs)
    }

    #[inline]
    pub fn shape(&self) -> &GameShape {
        &self.shape
    }

    #[inline]
    pub fn num_players(&self) -> usize {
        self.shape.num_players()
    }

    #[inline]
    pub fn payoff(&self, player: usize, profile: usize) -> T {
        self.payoffs[player][profile]
    }

    pub fn payoffs(&self, player: usize) -> &[T] {
        &self.payoffs[player]
    }

    pub fn all_payoffs(&self) -> &[Vec<T>] {
        &self.payoffs
    }

    pub fn into_payoffs(self) -> Vec<Vec<T>> {
        self.payoffs
    }

    /// Player-major concatenation, the coordinate layout of the deviation map.
    pub fn stacked(&self) -> Vec<T> {
        self.payoffs.iter().flatten().copied().collect()
    }

    pub fn from_stacked(shape: GameShape, stacked: &[T]) -> Result<Self> {
        let a = shape.total_profiles();
        if stacked.len() != a * shape.num_players() {
            return Err(Error::InvalidPayoffs(format!(
                "stacked vector has {} entries, expected {}",
                stacked.len(),
                a * shape.num_players()
            )));
        }
        Self::new(shape, stacked.chunks(a).map(<[T]>::to_vec).collect())
    }

    /// Entrywise `self * a + other * b`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.label(),
                found: other.shape.label(),
            });
        }
        let payoffs = self
            .payoffs
            .iter()
            .zip(&other.payoffs)
            .map(|(u, v)| u.iter().zip(v).map(|(&x, &y)| a * x + b * y).collect())
            .collect();
        Self::new(self.shape.clone(), payoffs)
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            shape: self.shape.clone(),
            payoffs: self
                .payoffs
                .iter()
                .map(|u| u.iter().map(|&x| x * c).collect())
                .collect(),
        }
    }

    pub fn pure_payoffs(&self, profile: &PureProfile) -> Result<Vec<T>> {
        let idx = self.shape.profile_index(profile)?;
        Ok(self.payoffs.iter().map(|u| u[idx]).collect())
    }

    /// Expected payoff of each pure action of `player` against the opponents'
    /// mixed strategies in `s`, summed exactly over opponent profiles.
    pub fn payoff_gradient(&self, s: &MixedProfile<T>, player: usize) -> Vec<T> {
        let mut grad = vec![T::zero(); self.shape.num_actions(player)];
        let u = &self.payoffs[player];
        for_each_profile_weight(&self.shape, s, player, |idx, own, w| {
            grad[own] = grad[own] + w * u[idx];
        });
        grad
    }

    /// Payoff gradients for all players at once.
    pub fn payoff_gradients(&self, s: &MixedProfile<T>) -> Vec<Vec<T>> {
        (0..self.num_players())
            .map(|i| self.payoff_gradient(s, i))
            .collect()
    }

    /// Expected payoff `u_i(s)`.
    pub fn expected_payoff(&self, s: &MixedProfile<T>, player: usize) -> T {
        dot(&self.payoff_gradient(s, player), s.strategy(player))
    }

    /// Lowest-index maximiser of the payoff gradient.
    pub fn best_response(&self, s: &MixedProfile<T>, player: usize) -> usize {
        argmax_lowest(&self.payoff_gradient(s, player))
    }

    /// Relative utility loss `(b - c) / |b|`, where `b` is the best-response
    /// value and `c` the current expected payoff.
    ///
    /// For `b > 0` this is `1 - c/b`. When `|b| <= LOSS_RATIO_FLOOR` the
    /// absolute loss `b - c` is returned instead.
    pub fn relative_utility_loss(&self, s: &MixedProfile<T>, player: usize) -> T {
        let grad = self.payoff_gradient(s, player);
        relative_loss_from_gradient(&grad, s.strategy(player))
    }
}

/// Relative utility loss given a player's payoff gradient and strategy.
pub fn relative_loss_from_gradient<T: Scalar>(grad: &[T], strategy: &[T]) -> T {
    let best = grad.iter().copied().fold(T::neg_infinity(), T::max);
    let current = dot(grad, strategy);
    let gap = best - current;
    if best.abs() > T::of(LOSS_RATIO_FLOOR) {
        gap / best.abs()
    } else {
        gap
    }
}

pub(crate) fn argmax_lowest<T: Scalar>(v: &[T]) -> usize {
    let mut best = 0;
    for (k, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = k;
        }
    }
    best
}

/// Visit every profile with `player`'s own action and the probability the
/// opponents assign to the rest of the profile.
fn for_each_profile_weight<T: Scalar>(
    shape: &GameShape,
    s: &MixedProfile<T>,
    player: usize,
    mut visit: impl FnMut(usize, usize, T),
) {
    let n = shape.num_players();
    let mut digits = vec![0usize; n];
    for idx in 0..shape.total_profiles() {
        let mut w = T::one();
        for (j, &d) in digits.iter().enumerate() {
            if j != player {
                w = w * s.strategies[j][d];
            }
        }
        visit(idx, digits[player], w);
        // odometer increment, last player fastest
        for j in (0..n).rev() {
            digits[j] += 1;
            if digits[j] < shape.num_actions(j) {
                break;
            }
            digits[j] = 0;
        }
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<T> {
    strategies: Vec<Vec<T>>,
}

impl<T: Scalar> MixedProfile<T> {
    /// Validates nonnegativity and unit sums (within 1e-12, or a few ulps
    /// for single precision).
    pub fn new(strategies: Vec<Vec<T>>) -> Result<Self> {
        let tol = T::of(1e-12).max(T::epsilon() * T::of(16.0));
        for (i, s) in strategies.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidProfile(format!("player {i} strategy is empty")));
            }
            if s.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
                return Err(Error::InvalidProfile(format!(
                    "player {i} strategy has negative or non-finite entries"
                )));
            }
            let total: T = s.iter().copied().sum();
            if (total - T::one()).abs() > tol {
                return Err(Error::InvalidProfile(format!(
                    "player {i} strategy sums to {total}"
                )));
            }
        }
        Ok(Self { strategies })
    }

    pub(crate) fn from_raw(strategies: Vec<Vec<T>>) -> Self {
        Self { strategies }
    }

    /// Point mass on a pure profile.
    pub fn pure(shape: &GameShape, profile: &PureProfile) -> Result<Self> {
        shape.profile_index(profile)?;
        Ok(Self {
            strategies: profile
                .actions()
                .iter()
                .zip(shape.actions())
                .map(|(&a, &m)| {
                    let mut v = vec![T::zero(); m];
                    v[a] = T::one();
                    v
                })
                .collect(),
        })
    }

    pub fn num_players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, player: usize) -> &[T] {
        &self.strategies[player]
    }

    pub fn strategies(&self) -> &[Vec<T>] {
        &self.strategies
    }

    pub fn matches(&self, shape: &GameShape) -> bool {
        self.strategies.len() == shape.num_players()
            && self
                .strategies
                .iter()
                .zip(shape.actions())
                .all(|(s, &m)| s.len() == m)
    }

    /// Largest total-variation distance of any player's strategy to the pure
    /// strategy on its most likely action.
    pub fn impurity(&self) -> T {
        self.strategies
            .iter()
            .map(|s| T::one() - s.iter().copied().fold(T::zero(), T::max))
            .fold(T::zero(), T::max)
    }

    /// Most likely action of each player (lowest index on ties).
    pub fn argmax_profile(&self) -> PureProfile {
        PureProfile(self.strategies.iter().map(|s| argmax_lowest(s)).collect())
    }

    /// Largest coordinate-wise distance to another profile.
    pub fn max_distance(&self, other: &Self) -> T {
        self.strategies
            .iter()
            .zip(&other.strategies)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| (x - y).abs()))
            .fold(T::zero(), T::max)
    }
}
