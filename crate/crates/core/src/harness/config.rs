use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::OMDConfig;
use crate::econ::EconKind;
use crate::error::{Error, Result};
use crate::game::GameShape;
use crate::hodge::ShapeLimits;

/// Parameters shared by every experiment. Loaded from a single JSON
/// document; missing fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub settings: Vec<GameShape>,
    /// `None` picks 10^4 games for two players and 10^3 otherwise.
    pub samples_per_setting: Option<usize>,
    pub bins: usize,
    pub omd: OMDConfig,
    pub master_seed: u64,
    /// 1 runs from the uniform profile only; more draws that many random
    /// initial profiles per game.
    pub num_random_inits: usize,
    /// Bins with fewer games are reported but carry no trend claim.
    pub min_bin_games: usize,
    pub limits: ShapeLimits,

    pub kinds: Vec<EconKind>,
    pub alpha_steps: usize,
    pub alpha_actions: usize,
    pub alpha_valuations: Vec<f64>,
    pub alpha_inits: usize,
    pub alpha_omd: OMDConfig,

    pub jordan_samples: usize,
    pub bench_runs: usize,
    pub bench_construction_budget_secs: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: "default".into(),
            settings: vec![
                GameShape::new(vec![2, 2]).unwrap(),
                GameShape::new(vec![2, 2, 2]).unwrap(),
                GameShape::new(vec![10, 10]).unwrap(),
            ],
            samples_per_setting: None,
            bins: 20,
            omd: OMDConfig::random_games(),
            master_seed: 0,
            num_random_inits: 1,
            min_bin_games: 200,
            limits: ShapeLimits::default(),
            kinds: EconKind::ALL.to_vec(),
            alpha_steps: 20,
            alpha_actions: 16,
            alpha_valuations: vec![1.0, 1.0],
            alpha_inits: 100,
            alpha_omd: OMDConfig::economic(),
            jordan_samples: 100,
            bench_runs: 100,
            bench_construction_budget_secs: 300.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if self.samples_per_setting == Some(0) {
            return bad("samples_per_setting must be at least 1".into());
        }
        if self.num_random_inits == 0 || self.alpha_inits == 0 {
            return bad("need at least one initialization".into());
        }
        if self.alpha_steps == 0 {
            return bad("alpha_steps must be at least 1".into());
        }
        self.omd.validate()?;
        self.alpha_omd.validate()?;
        for s in &self.settings {
            self.limits.check(s)?;
        }
        Ok(())
    }

    pub fn samples_for(&self, shape: &GameShape) -> usize {
        self.samples_per_setting.unwrap_or(if shape.num_players() == 2 {
            10_000
        } else {
            1_000
        })
    }

    /// `i / alpha_steps` for `i = 0..=alpha_steps`.
    pub fn alpha_grid(&self) -> Vec<f64> {
        (0..=self.alpha_steps)
            .map(|i| i as f64 / self.alpha_steps as f64)
            .collect()
    }
}

/// Where an experiment writes its files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub dir: PathBuf,
}

impl OutputPaths {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}
