//! Wall-clock cost of operator construction and of warm potentialness
//! evaluation.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::game::{sample_random_game, GameShape};
use crate::hodge::{potentialness, DecompositionOperators};

use super::config::ExperimentConfig;
use super::csv::{CsvMeta, CsvTable};
use super::random_games::game_seed;
use super::stats::{mean, population_stddev};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub setting: String,
    pub n_runs: usize,
    pub construction_seconds: f64,
    pub construction_within_budget: bool,
    pub mean_seconds: f64,
    pub stddev_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
}

/// Operators are built once per setting (timed separately); the games are
/// sampled before the clock starts.
pub fn run_runtime_benchmark(cfg: &ExperimentConfig, settings: &[GameShape]) -> Result<BenchResult> {
    let mut rows = Vec::new();
    for shape in settings {
        let start = Instant::now();
        let ops = DecompositionOperators::<f64>::build_with_limits(shape, cfg.limits)?;
        let construction = start.elapsed().as_secs_f64();
        let games: Vec<_> = (0..cfg.bench_runs)
            .map(|k| sample_random_game::<f64>(shape, game_seed(cfg, shape, k)))
            .collect();
        let mut times = Vec::with_capacity(games.len());
        for g in &games {
            let t0 = Instant::now();
            std::hint::black_box(potentialness(&ops, g)?);
            times.push(t0.elapsed().as_secs_f64());
        }
        rows.push(BenchRow {
            setting: shape.label(),
            n_runs: games.len(),
            construction_seconds: construction,
            construction_within_budget: construction <= cfg.bench_construction_budget_secs,
            mean_seconds: mean(&times).unwrap_or(0.0),
            stddev_seconds: population_stddev(&times).unwrap_or(0.0),
        });
    }
    Ok(BenchResult { rows })
}

impl BenchResult {
    pub fn csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "setting",
                "n_runs",
                "construction_seconds",
                "construction_within_budget",
                "mean_seconds",
                "stddev_seconds",
            ],
        );
        for r in &self.rows {
            t.row(vec![
                r.setting.clone().into(),
                r.n_runs.into(),
                r.construction_seconds.into(),
                r.construction_within_budget.into(),
                r.mean_seconds.into(),
                r.stddev_seconds.into(),
            ]);
        }
        t
    }
}
