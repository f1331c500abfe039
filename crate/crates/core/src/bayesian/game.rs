use rayon::prelude::*;
use serde::Serialize;

use crate::econ::EconKind;
use crate::error::{Error, Result};
use crate::game::{pure_equilibria, GameShape, NormalFormGame};
use crate::hodge::{potentialness, OperatorCache, ShapeLimits};
use crate::scalar::{CompensatedSum, Scalar};

use super::monotone::{enumerate_monotone_strategies, MonotoneStrategy};

/// Action grid used by default for the incomplete-information sweeps.
pub const DEFAULT_BAYES_GRID: [f64; 4] = [0.0, 0.3, 0.6, 0.9];

/// Finite Bayesian game with independent types.
///
/// Each player's type is their valuation; `priors[i][k]` is the probability
/// of `types[i][k]`. The ex-post payoff comes from an [`EconKind`] kernel with
/// each player's own type as their valuation (for Tullock contests, as the
/// prize they compete for).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesianGame {
    pub kind: EconKind,
    pub types: Vec<Vec<f64>>,
    pub priors: Vec<Vec<f64>>,
    pub action_grids: Vec<Vec<f64>>,
}

impl BayesianGame {
    /// Types `k / V_i` for `k = 1..=V_i`, each with probability `1 / V_i`.
    pub fn uniform(kind: EconKind, type_counts: &[usize], action_grid: &[f64]) -> Result<Self> {
        let game = Self {
            kind,
            types: type_counts
                .iter()
                .map(|&v| (1..=v).map(|k| k as f64 / v as f64).collect())
                .collect(),
            priors: type_counts
                .iter()
                .map(|&v| vec![1.0 / v as f64; v])
                .collect(),
            action_grids: vec![action_grid.to_vec(); type_counts.len()],
        };
        game.validate()?;
        Ok(game)
    }

    pub fn num_players(&self) -> usize {
        self.types.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.types.len();
        if n < 2 || self.priors.len() != n || self.action_grids.len() != n {
            return Err(Error::InvalidParameter(
                "types, priors and action grids must cover the same players (at least 2)".into(),
            ));
        }
        for i in 0..n {
            let (t, p, a) = (&self.types[i], &self.priors[i], &self.action_grids[i]);
            if t.is_empty() || t.len() != p.len() {
                return Err(Error::InvalidParameter(format!(
                    "player {i} needs one prior weight per type"
                )));
            }
            if t.windows(2).any(|w| w[0] >= w[1]) || a.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "player {i}: types and actions must be strictly increasing"
                )));
            }
            if a.len() < 2 {
                return Err(Error::InvalidParameter(format!(
                    "player {i} needs at least 2 actions"
                )));
            }
            let total: f64 = p.iter().sum();
            if p.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "player {i}: prior weights must be nonnegative and sum to 1"
                )));
            }
        }
        Ok(())
    }

    pub fn strategies(&self, player: usize) -> Result<Vec<MonotoneStrategy>> {
        enumerate_monotone_strategies(self.types[player].len(), self.action_grids[player].len())
    }

    /// Normal form over monotone strategies with ex-ante expected payoffs.
    pub fn induced_normal_form<T: Scalar>(&self, limits: ShapeLimits) -> Result<InducedGame<T>> {
        self.validate()?;
        let n = self.num_players();
        let strategies: Vec<Vec<MonotoneStrategy>> =
            (0..n).map(|i| self.strategies(i)).collect::<Result<_>>()?;
        let shape = GameShape::new(strategies.iter().map(Vec::len).collect())?;
        limits.check(&shape)?;

        let type_shape: Vec<usize> = self.types.iter().map(Vec::len).collect();
        let type_profiles: Vec<Vec<usize>> = mixed_radix(&type_shape);
        let weights: Vec<T> = type_profiles
            .iter()
            .map(|tp| {
                tp.iter()
                    .enumerate()
                    .fold(T::one(), |w, (j, &k)| w * T::of(self.priors[j][k]))
            })
            .collect();

        let mut bids = vec![T::zero(); n];
        let mut values = vec![T::zero(); n];
        let mut payoffs = vec![Vec::with_capacity(shape.total_profiles()); n];
        let mut sums = vec![CompensatedSum::<T>::new(); n];
        for idx in 0..shape.total_profiles() {
            sums.iter_mut().for_each(|s| *s = CompensatedSum::new());
            for (tp, &w) in type_profiles.iter().zip(&weights) {
                for j in 0..n {
                    let strat = &strategies[j][shape.action_of(idx, j)];
                    bids[j] = T::of(self.action_grids[j][strat.action(tp[j])]);
                    values[j] = T::of(self.types[j][tp[j]]);
                }
                for (i, s) in sums.iter_mut().enumerate() {
                    s.add(w * self.kind.ex_post_utility(&bids, &values, i));
                }
            }
            for (col, s) in payoffs.iter_mut().zip(&sums) {
                col.push(s.value());
            }
        }
        Ok(InducedGame {
            game: NormalFormGame::new(shape, payoffs)?,
            strategies,
        })
    }
}

/// Induced normal form with the strategy behind each action index.
#[derive(Debug, Clone)]
pub struct InducedGame<T> {
    pub game: NormalFormGame<T>,
    pub strategies: Vec<Vec<MonotoneStrategy>>,
}

fn mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    (0..total)
        .map(|mut code| {
            let mut digits = vec![0; radices.len()];
            for (d, &r) in digits.iter_mut().zip(radices).rev() {
                *d = code % r;
                code /= r;
            }
            digits
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesSweepRow {
    pub kind: EconKind,
    pub n_types: usize,
    pub n_strategies: usize,
    pub potentialness: Option<f64>,
    pub has_pure_bne: bool,
}

/// Two players with the same action grid and `V` uniform types each, for
/// every `V` in `type_counts`.
pub fn bayesian_potentialness_sweep(
    cache: &OperatorCache<f64>,
    kind: EconKind,
    action_grid: &[f64],
    type_counts: &[usize],
) -> Result<Vec<BayesSweepRow>> {
    type_counts
        .par_iter()
        .map(|&v| {
            let b = BayesianGame::uniform(kind, &[v, v], action_grid)?;
            let induced = b.induced_normal_form::<f64>(cache.limits())?;
            let ops = cache.get(induced.game.shape())?;
            Ok(BayesSweepRow {
                kind,
                n_types: v,
                n_strategies: induced.strategies[0].len(),
                potentialness: potentialness(&ops, &induced.game)?.value(),
                has_pure_bne: pure_equilibria(&induced.game).has_pure_ne(),
            })
        })
        .collect()
}
