//! Convergence of OMD on blends of an economic game's potential and
//! harmonic parts.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{random_init, run_omd};
use crate::econ::{build_econ_game, EconGameSpec, EconKind};
use crate::error::Result;
use crate::game::has_strict_pure_ne;
use crate::hodge::{alpha_blend, decompose_payoffs, potentialness, OperatorCache};

use super::config::ExperimentConfig;
use super::csv::{CsvMeta, CsvTable};
use super::seed::{derive_seed, setting_id};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub kind: EconKind,
    pub alpha: f64,
    pub potentialness: Option<f64>,
    /// Potentialness of the unblended game.
    pub original_potentialness: Option<f64>,
    pub has_spne: bool,
    pub n_inits: usize,
    pub convergence_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct AlphaSweepResult {
    pub rows: Vec<AlphaRow>,
}

pub fn run_alpha_sweep(cfg: &ExperimentConfig, cache: &OperatorCache<f64>) -> Result<AlphaSweepResult> {
    let alphas = cfg.alpha_grid();
    let mut rows = Vec::new();
    for &kind in &cfg.kinds {
        let spec = EconGameSpec::symmetric_grid(kind, cfg.alpha_valuations.clone(), cfg.alpha_actions)?;
        let g = build_econ_game::<f64>(&spec)?;
        let ops = cache.get(g.shape())?;
        let dec = decompose_payoffs(&ops, &g)?;
        let original = dec.potentialness.value();
        let stream = setting_id(&format!("alpha:{kind}"));
        // the same initial profiles are reused at every blend weight
        let inits: Vec<_> = (0..cfg.alpha_inits)
            .map(|k| random_init::<f64>(g.shape(), derive_seed(cfg.master_seed, stream, k as u64)))
            .collect();
        for &alpha in &alphas {
            let blended = alpha_blend(&dec, alpha)?;
            let converged = inits
                .par_iter()
                .map(|init| run_omd(&blended, init, &cfg.alpha_omd).map(|t| t.converged))
                .collect::<Result<Vec<bool>>>()?;
            rows.push(AlphaRow {
                kind,
                alpha,
                potentialness: potentialness(&ops, &blended)?.value(),
                original_potentialness: original,
                has_spne: has_strict_pure_ne(&blended),
                n_inits: inits.len(),
                convergence_fraction: converged.iter().filter(|&&c| c).count() as f64
                    / inits.len() as f64,
            });
        }
    }
    Ok(AlphaSweepResult { rows })
}

/// Where the convergence fraction jumps from low to high along the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub kind: EconKind,
    /// First grid index with convergence fraction above the low band.
    pub convergence_index: Option<usize>,
    pub convergence_alpha: Option<f64>,
    /// Potentialness of the blend at the convergence threshold.
    pub convergence_potentialness: Option<f64>,
    /// Fraction is at most `low` before the threshold and at least `high`
    /// after it, the threshold point itself excepted.
    pub step_shape: bool,
    /// First grid index from which every blend has a strict pure
    /// equilibrium.
    pub spne_index: Option<usize>,
    pub spne_alpha: Option<f64>,
}

impl ThresholdSummary {
    /// Thresholds agree to within one grid step.
    pub fn boundaries_match(&self) -> bool {
        match (self.convergence_index, self.spne_index) {
            (Some(c), Some(s)) => c.abs_diff(s) <= 1,
            _ => false,
        }
    }
}

pub const THRESHOLD_LOW: f64 = 0.1;
pub const THRESHOLD_HIGH: f64 = 0.9;

pub fn threshold_summary(kind: EconKind, rows: &[&AlphaRow]) -> ThresholdSummary {
    let fracs: Vec<f64> = rows.iter().map(|r| r.convergence_fraction).collect();
    let conv = fracs.iter().position(|&f| f > THRESHOLD_LOW);
    let step_shape = conv.is_some_and(|j| {
        fracs[..j].iter().all(|&f| f <= THRESHOLD_LOW)
            && fracs[j + 1..].iter().all(|&f| f >= THRESHOLD_HIGH)
    });
    let spne = (0..rows.len())
        .find(|&j| rows[j..].iter().all(|r| r.has_spne));
    ThresholdSummary {
        kind,
        convergence_index: conv,
        convergence_alpha: conv.map(|j| rows[j].alpha),
        convergence_potentialness: conv.and_then(|j| rows[j].potentialness),
        step_shape,
        spne_index: spne,
        spne_alpha: spne.map(|j| rows[j].alpha),
    }
}

impl AlphaSweepResult {
    pub fn rows_for(&self, kind: EconKind) -> Vec<&AlphaRow> {
        self.rows.iter().filter(|r| r.kind == kind).collect()
    }

    pub fn thresholds(&self) -> Vec<ThresholdSummary> {
        let mut kinds: Vec<EconKind> = self.rows.iter().map(|r| r.kind).collect();
        kinds.dedup();
        kinds
            .into_iter()
            .map(|k| threshold_summary(k, &self.rows_for(k)))
            .collect()
    }

    pub fn csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "kind",
                "alpha",
                "potentialness",
                "original_potentialness",
                "has_spne",
                "n_inits",
                "convergence_fraction",
            ],
        );
        for r in &self.rows {
            t.row(vec![
                r.kind.name().into(),
                r.alpha.into(),
                r.potentialness.into(),
                r.original_potentialness.into(),
                r.has_spne.into(),
                r.n_inits.into(),
                r.convergence_fraction.into(),
            ]);
        }
        t
    }

    pub fn thresholds_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "kind",
                "convergence_alpha",
                "convergence_potentialness",
                "spne_alpha",
                "step_shape",
                "boundaries_match",
            ],
        );
        for s in self.thresholds() {
            t.row(vec![
                s.kind.name().into(),
                s.convergence_alpha.into(),
                s.convergence_potentialness.into(),
                s.spne_alpha.into(),
                s.step_shape.into(),
                s.boundaries_match().into(),
            ]);
        }
        t
    }
}
