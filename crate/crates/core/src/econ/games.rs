use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{pure_equilibria, GameShape, NormalFormGame};
use crate::hodge::{potentialness, OperatorCache};
use crate::scalar::Scalar;

use super::kinds::EconKind;

/// Complete-information economic game on equidistant bid grids.
///
/// Player `i` bids one of `k / (m_i - 1)`, `k = 0..m_i`. For Tullock
/// contests each player's valuation is the prize that player competes for;
/// equal valuations give the common-prize contest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconGameSpec {
    pub kind: EconKind,
    pub valuations: Vec<f64>,
    pub actions_per_player: Vec<usize>,
}

impl EconGameSpec {
    pub fn new(kind: EconKind, valuations: Vec<f64>, actions_per_player: Vec<usize>) -> Result<Self> {
        let spec = Self {
            kind,
            valuations,
            actions_per_player,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Every player gets `actions` grid points.
    pub fn symmetric_grid(kind: EconKind, valuations: Vec<f64>, actions: usize) -> Result<Self> {
        let n = valuations.len();
        Self::new(kind, valuations, vec![actions; n])
    }

    pub fn num_players(&self) -> usize {
        self.valuations.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.valuations.len() != self.actions_per_player.len() {
            return Err(Error::InvalidParameter(format!(
                "{} valuations for {} players",
                self.valuations.len(),
                self.actions_per_player.len()
            )));
        }
        if let Some(v) = self.valuations.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "valuation {v} outside (0, 1]"
            )));
        }
        GameShape::new(self.actions_per_player.clone()).map(|_| ())
    }

    pub fn bid_grid<T: Scalar>(&self, player: usize) -> Vec<T> {
        bid_grid(self.actions_per_player[player])
    }
}

/// `m` equidistant points on `[0, 1]` including both endpoints.
pub fn bid_grid<T: Scalar>(m: usize) -> Vec<T> {
    let denom = T::of_usize(m - 1);
    (0..m).map(|k| T::of_usize(k) / denom).collect()
}

pub fn build_econ_game<T: Scalar>(spec: &EconGameSpec) -> Result<NormalFormGame<T>> {
    spec.validate()?;
    let shape = GameShape::new(spec.actions_per_player.clone())?;
    let grids: Vec<Vec<T>> = (0..spec.num_players()).map(|i| spec.bid_grid(i)).collect();
    let values: Vec<T> = spec.valuations.iter().map(|&v| T::of(v)).collect();
    let mut bids = vec![T::zero(); spec.num_players()];
    let mut payoffs = vec![Vec::with_capacity(shape.total_profiles()); spec.num_players()];
    for idx in 0..shape.total_profiles() {
        for (j, b) in bids.iter_mut().enumerate() {
            *b = grids[j][shape.action_of(idx, j)];
        }
        for (i, col) in payoffs.iter_mut().enumerate() {
            col.push(spec.kind.ex_post_utility(&bids, &values, i));
        }
    }
    NormalFormGame::new(shape, payoffs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub kind: EconKind,
    pub n_actions: usize,
    pub valuations: Vec<f64>,
    /// `None` for games without strategic content.
    pub potentialness: Option<f64>,
    pub n_pure_ne: usize,
    pub n_strict_ne: usize,
}

/// Potentialness and pure-equilibrium counts for each grid size, every
/// player using the same grid.
pub fn discretization_sweep(
    cache: &OperatorCache<f64>,
    kind: EconKind,
    valuations: &[f64],
    action_counts: &[usize],
) -> Result<Vec<SweepRow>> {
    action_counts
        .par_iter()
        .map(|&m| {
            let spec = EconGameSpec::symmetric_grid(kind, valuations.to_vec(), m)?;
            let g = build_econ_game::<f64>(&spec)?;
            let ops = cache.get(g.shape())?;
            let p = potentialness(&ops, &g)?;
            let report = pure_equilibria(&g);
            Ok(SweepRow {
                kind,
                n_actions: m,
                valuations: valuations.to_vec(),
                potentialness: p.value(),
                n_pure_ne: report.pure_ne.len(),
                n_strict_ne: report.strict_pure_ne.len(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g: Vec<f64> = bid_grid(5);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn spec_validation() {
        assert!(EconGameSpec::symmetric_grid(EconKind::Fpsb, vec![1.0, 1.2], 5).is_err());
        assert!(EconGameSpec::symmetric_grid(EconKind::Fpsb, vec![0.0, 1.0], 5).is_err());
        assert!(EconGameSpec::new(EconKind::Fpsb, vec![1.0, 1.0], vec![5]).is_err());
        assert!(EconGameSpec::symmetric_grid(EconKind::Fpsb, vec![1.0, 1.0], 1).is_err());
    }

    #[test]
    fn tullock_zero_profile_splits_prize() {
        let spec = EconGameSpec::symmetric_grid(EconKind::Tullock, vec![1.0, 1.0], 3).unwrap();
        let g = build_econ_game::<f64>(&spec).unwrap();
        assert_eq!(g.payoff(0, 0), 0.5);
        assert_eq!(g.payoff(1, 0), 0.5);
    }

    #[test]
    fn fpsb_entries() {
        let spec = EconGameSpec::symmetric_grid(EconKind::Fpsb, vec![1.0, 1.0], 3).unwrap();
        let g = build_econ_game::<f64>(&spec).unwrap();
        // bids (0.5, 0): player 0 wins and keeps 0.5
        let idx = g.shape().index_of(&[1, 0]).unwrap();
        assert_eq!((g.payoff(0, idx), g.payoff(1, idx)), (0.5, 0.0));
    }
}
