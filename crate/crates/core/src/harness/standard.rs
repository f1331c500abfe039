//! Potentialness and OMD verdicts for textbook games.

use serde::Serialize;

use crate::dynamics::{run_omd, uniform_init, OMDConfig};
use crate::error::Result;
use crate::game::{rng_from_seed, standard, NormalFormGame};
use crate::hodge::{potentialness, OperatorCache};

use super::config::ExperimentConfig;
use super::csv::{CsvMeta, CsvTable};
use super::seed::{derive_seed, setting_id};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardGameRow {
    pub game: String,
    pub shape: String,
    pub potentialness: Option<f64>,
    /// Relative loss fell below the tolerance.
    pub converged: bool,
    /// Converged onto a pure equilibrium vertex.
    pub reached_pure_ne: bool,
    pub iterations: usize,
    pub final_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanRow {
    pub alpha: f64,
    pub beta: f64,
    pub potentialness: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct StandardGamesResult {
    pub games: Vec<StandardGameRow>,
    pub jordan: Vec<JordanRow>,
}

impl StandardGamesResult {
    pub fn row(&self, name: &str) -> Option<&StandardGameRow> {
        self.games.iter().find(|r| r.game == name)
    }
}

pub fn named_standard_games() -> Vec<(&'static str, NormalFormGame<f64>)> {
    vec![
        ("matching_pennies", standard::matching_pennies()),
        ("battle_of_the_sexes", standard::battle_of_the_sexes()),
        ("prisoners_dilemma", standard::prisoners_dilemma()),
        ("shapley", standard::shapley()),
    ]
}

pub fn run_standard_games(cfg: &ExperimentConfig, cache: &OperatorCache<f64>) -> Result<StandardGamesResult> {
    let omd = OMDConfig {
        eta0: cfg.omd.eta0,
        beta: cfg.omd.beta,
        ..OMDConfig::random_games()
    };
    let mut games = Vec::new();
    for (name, g) in named_standard_games() {
        let ops = cache.get(g.shape())?;
        let tr = run_omd(&g, &uniform_init(g.shape()), &omd)?;
        games.push(StandardGameRow {
            game: name.into(),
            shape: g.shape().label(),
            potentialness: potentialness(&ops, &g)?.value(),
            converged: tr.converged,
            reached_pure_ne: tr.pure_equilibrium.is_some(),
            iterations: tr.iterations_used,
            final_loss: tr.final_loss(),
        });
    }
    let mut rng = rng_from_seed(derive_seed(cfg.master_seed, setting_id("jordan"), 0));
    let mut jordan = Vec::with_capacity(cfg.jordan_samples);
    for _ in 0..cfg.jordan_samples {
        let (alpha, beta, g) = standard::random_jordan::<f64, _>(&mut rng);
        let ops = cache.get(g.shape())?;
        jordan.push(JordanRow {
            alpha,
            beta,
            potentialness: potentialness(&ops, &g)?.value(),
        });
    }
    Ok(StandardGamesResult { games, jordan })
}

impl StandardGamesResult {
    pub fn games_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "game",
                "shape",
                "potentialness",
                "converged",
                "reached_pure_ne",
                "iterations",
                "final_loss",
            ],
        );
        for r in &self.games {
            t.row(vec![
                r.game.clone().into(),
                r.shape.clone().into(),
                r.potentialness.into(),
                r.converged.into(),
                r.reached_pure_ne.into(),
                r.iterations.into(),
                r.final_loss.into(),
            ]);
        }
        t
    }

    pub fn jordan_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(meta, &["alpha", "beta", "potentialness"]);
        for r in &self.jordan {
            t.row(vec![r.alpha.into(), r.beta.into(), r.potentialness.into()]);
        }
        t
    }
}
