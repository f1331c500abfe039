//! Experiments on games with i.i.d. uniform payoffs.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{random_init, run_omd, uniform_init};
use crate::error::Result;
use crate::game::{has_strict_pure_ne, pure_equilibria, sample_random_game, GameShape};
use crate::hodge::{potentialness, OperatorCache};

use super::config::ExperimentConfig;
use super::csv::{CsvMeta, CsvTable};
use super::seed::{derive_seed, setting_id};
use super::stats::{bin_bounds, bin_index, mean, population_stddev, sample_variance, spearman, Tally};

/// Stream identifier for initial profiles, mixed into a game's seed.
const INIT_STREAM: u64 = 0x1A17_1A17_1A17_1A17;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameRecord {
    pub setting: String,
    pub game_index: usize,
    pub seed: u64,
    pub potentialness: Option<f64>,
    pub has_pure_ne: bool,
    pub has_spne: bool,
}

pub fn game_seed(cfg: &ExperimentConfig, shape: &GameShape, index: usize) -> u64 {
    derive_seed(cfg.master_seed, setting_id(&shape.label()), index as u64)
}

/// Sample and classify every game of one setting.
pub fn sample_setting(
    cfg: &ExperimentConfig,
    shape: &GameShape,
    cache: &OperatorCache<f64>,
) -> Result<Vec<GameRecord>> {
    let ops = cache.get(shape)?;
    let label = shape.label();
    (0..cfg.samples_for(shape))
        .into_par_iter()
        .map(|k| {
            let seed = game_seed(cfg, shape, k);
            let g = sample_random_game::<f64>(shape, seed);
            let report = pure_equilibria(&g);
            Ok(GameRecord {
                setting: label.clone(),
                game_index: k,
                seed,
                potentialness: potentialness(&ops, &g)?.value(),
                has_pure_ne: report.has_pure_ne(),
                has_spne: report.has_strict_ne(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingSummary {
    pub setting: String,
    pub n_games: usize,
    pub mean_potentialness: Option<f64>,
    pub variance_potentialness: Option<f64>,
    pub pure_ne_fraction: Option<f64>,
    pub spne_fraction: Option<f64>,
}

fn summarize(setting: &str, games: &[GameRecord]) -> SettingSummary {
    let ps: Vec<f64> = games.iter().filter_map(|g| g.potentialness).collect();
    let mut pure = Tally::default();
    let mut strict = Tally::default();
    for g in games {
        pure.record(g.has_pure_ne);
        strict.record(g.has_spne);
    }
    SettingSummary {
        setting: setting.into(),
        n_games: games.len(),
        mean_potentialness: mean(&ps),
        variance_potentialness: sample_variance(&ps),
        pure_ne_fraction: pure.fraction(),
        spne_fraction: strict.fraction(),
    }
}

#[derive(Debug, Clone)]
pub struct DistributionResult {
    pub games: Vec<GameRecord>,
    pub summaries: Vec<SettingSummary>,
}

pub fn run_distribution_experiment(
    cfg: &ExperimentConfig,
    cache: &OperatorCache<f64>,
) -> Result<DistributionResult> {
    let mut games = Vec::new();
    let mut summaries = Vec::new();
    for shape in &cfg.settings {
        let records = sample_setting(cfg, shape, cache)?;
        summaries.push(summarize(&shape.label(), &records));
        games.extend(records);
    }
    Ok(DistributionResult { games, summaries })
}

impl DistributionResult {
    pub fn games_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &["setting", "game_index", "seed", "potentialness", "has_pure_ne", "has_spne"],
        );
        for g in &self.games {
            t.row(vec![
                g.setting.clone().into(),
                g.game_index.into(),
                g.seed.into(),
                g.potentialness.into(),
                g.has_pure_ne.into(),
                g.has_spne.into(),
            ]);
        }
        t
    }

    pub fn summary_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "setting",
                "n_games",
                "mean_potentialness",
                "variance_potentialness",
                "pure_ne_fraction",
                "spne_fraction",
            ],
        );
        for s in &self.summaries {
            t.row(vec![
                s.setting.clone().into(),
                s.n_games.into(),
                s.mean_potentialness.into(),
                s.variance_potentialness.into(),
                s.pure_ne_fraction.into(),
                s.spne_fraction.into(),
            ]);
        }
        t
    }
}

/// Per-bin statistics over the potentialness intervals `((k-1)/B, k/B]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinStatistics {
    pub setting: String,
    pub bin: usize,
    pub lower: f64,
    pub upper: f64,
    pub n_games: usize,
    pub spne_fraction: Option<f64>,
    /// Games with a strict pure equilibrium (the convergence population).
    pub n_spne_games: usize,
    pub n_runs: usize,
    pub convergence_fraction: Option<f64>,
    /// Spread across games of each game's own convergence fraction.
    pub convergence_stddev: Option<f64>,
}

impl BinStatistics {
    fn empty(setting: &str, bin: usize, bins: usize) -> Self {
        let (lower, upper) = bin_bounds(bin, bins);
        Self {
            setting: setting.into(),
            bin,
            lower,
            upper,
            n_games: 0,
            spne_fraction: None,
            n_spne_games: 0,
            n_runs: 0,
            convergence_fraction: None,
            convergence_stddev: None,
        }
    }
}

fn spne_bins(setting: &str, games: &[GameRecord], bins: usize) -> Vec<BinStatistics> {
    let mut tallies = vec![Tally::default(); bins];
    for g in games {
        if let Some(p) = g.potentialness {
            tallies[bin_index(p, bins) - 1].record(g.has_spne);
        }
    }
    tallies
        .iter()
        .enumerate()
        .map(|(k, t)| BinStatistics {
            n_games: t.total,
            spne_fraction: t.fraction(),
            n_spne_games: t.hits,
            ..BinStatistics::empty(setting, k + 1, bins)
        })
        .collect()
}

/// Spearman correlation of bin index against SPNE fraction over bins
/// holding at least `min_games` games.
pub fn bin_trend(bins: &[BinStatistics], min_games: usize) -> Option<f64> {
    let (ks, fs): (Vec<f64>, Vec<f64>) = bins
        .iter()
        .filter(|b| b.n_games >= min_games)
        .filter_map(|b| b.spne_fraction.map(|f| (b.bin as f64, f)))
        .unzip();
    spearman(&ks, &fs)
}

/// Bins need this many games before they enter the rank correlation.
pub const TREND_MIN_BIN_GAMES: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpneSummary {
    pub setting: String,
    pub n_games: usize,
    pub pure_ne_fraction: Option<f64>,
    pub spne_fraction: Option<f64>,
    pub spearman: Option<f64>,
    pub trend_bins: usize,
}

#[derive(Debug, Clone)]
pub struct SpneResult {
    pub bins: Vec<BinStatistics>,
    pub summaries: Vec<SpneSummary>,
}

pub fn run_spne_experiment(cfg: &ExperimentConfig, cache: &OperatorCache<f64>) -> Result<SpneResult> {
    let mut bins = Vec::new();
    let mut summaries = Vec::new();
    for shape in &cfg.settings {
        let label = shape.label();
        let games = sample_setting(cfg, shape, cache)?;
        let b = spne_bins(&label, &games, cfg.bins);
        let s = summarize(&label, &games);
        summaries.push(SpneSummary {
            setting: label,
            n_games: games.len(),
            pure_ne_fraction: s.pure_ne_fraction,
            spne_fraction: s.spne_fraction,
            spearman: bin_trend(&b, TREND_MIN_BIN_GAMES),
            trend_bins: b.iter().filter(|x| x.n_games >= TREND_MIN_BIN_GAMES).count(),
        });
        bins.extend(b);
    }
    Ok(SpneResult { bins, summaries })
}

impl SpneResult {
    pub fn bins_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &["setting", "bin", "lower", "upper", "n_games", "spne_fraction"],
        );
        for b in &self.bins {
            t.row(vec![
                b.setting.clone().into(),
                b.bin.into(),
                b.lower.into(),
                b.upper.into(),
                b.n_games.into(),
                b.spne_fraction.into(),
            ]);
        }
        t
    }

    pub fn summary_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "setting",
                "n_games",
                "pure_ne_fraction",
                "spne_fraction",
                "spearman",
                "trend_bins",
            ],
        );
        for s in &self.summaries {
            t.row(vec![
                s.setting.clone().into(),
                s.n_games.into(),
                s.pure_ne_fraction.into(),
                s.spne_fraction.into(),
                s.spearman.into(),
                s.trend_bins.into(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceGame {
    pub setting: String,
    pub game_index: usize,
    pub seed: u64,
    pub potentialness: f64,
    pub n_inits: usize,
    pub n_converged: usize,
    pub n_pure: usize,
    pub mean_iterations: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceResult {
    pub bins: Vec<BinStatistics>,
    pub games: Vec<ConvergenceGame>,
}

struct RunOutcome {
    converged: bool,
    pure: bool,
    iterations: usize,
}

/// OMD on every game with a strict pure equilibrium. With one
/// initialization per game the run starts from the uniform profile;
/// otherwise from that many random profiles.
pub fn run_convergence_experiment(
    cfg: &ExperimentConfig,
    cache: &OperatorCache<f64>,
) -> Result<ConvergenceResult> {
    let mut all_bins = Vec::new();
    let mut all_games = Vec::new();
    for shape in &cfg.settings {
        let label = shape.label();
        let records = sample_setting(cfg, shape, cache)?;
        let mut bins = spne_bins(&label, &records, cfg.bins);
        let spne: Vec<&GameRecord> = records
            .iter()
            .filter(|g| g.has_spne && g.potentialness.is_some())
            .collect();
        let inits = cfg.num_random_inits;
        let tasks: Vec<(usize, usize)> = (0..spne.len())
            .flat_map(|gi| (0..inits).map(move |k| (gi, k)))
            .collect();
        let outcomes: Vec<RunOutcome> = tasks
            .par_iter()
            .map(|&(gi, k)| {
                let rec = spne[gi];
                let g = sample_random_game::<f64>(shape, rec.seed);
                debug_assert!(has_strict_pure_ne(&g));
                let init = if inits == 1 {
                    uniform_init(shape)
                } else {
                    random_init(shape, derive_seed(rec.seed, INIT_STREAM, k as u64))
                };
                let tr = run_omd(&g, &init, &cfg.omd)?;
                Ok(RunOutcome {
                    converged: tr.converged,
                    pure: tr.pure_equilibrium.is_some(),
                    iterations: tr.iterations_used,
                })
            })
            .collect::<Result<_>>()?;

        let mut per_bin: Vec<(Tally, Vec<f64>)> = vec![(Tally::default(), Vec::new()); cfg.bins];
        for (gi, rec) in spne.iter().enumerate() {
            let runs = &outcomes[gi * inits..(gi + 1) * inits];
            let n_converged = runs.iter().filter(|r| r.converged).count();
            let p = rec.potentialness.expect("filtered above");
            let slot = &mut per_bin[bin_index(p, cfg.bins) - 1];
            for r in runs {
                slot.0.record(r.converged);
            }
            slot.1.push(n_converged as f64 / inits as f64);
            all_games.push(ConvergenceGame {
                setting: label.clone(),
                game_index: rec.game_index,
                seed: rec.seed,
                potentialness: p,
                n_inits: inits,
                n_converged,
                n_pure: runs.iter().filter(|r| r.pure).count(),
                mean_iterations: runs.iter().map(|r| r.iterations as f64).sum::<f64>()
                    / inits as f64,
            });
        }
        for (b, (tally, fractions)) in bins.iter_mut().zip(&per_bin) {
            b.n_runs = tally.total;
            b.convergence_fraction = tally.fraction();
            b.convergence_stddev = population_stddev(fractions);
        }
        all_bins.extend(bins);
    }
    Ok(ConvergenceResult {
        bins: all_bins,
        games: all_games,
    })
}

impl ConvergenceResult {
    pub fn bins_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "setting",
                "bin",
                "lower",
                "upper",
                "n_games",
                "n_spne_games",
                "n_runs",
                "convergence_fraction",
                "convergence_stddev",
            ],
        );
        for b in &self.bins {
            t.row(vec![
                b.setting.clone().into(),
                b.bin.into(),
                b.lower.into(),
                b.upper.into(),
                b.n_games.into(),
                b.n_spne_games.into(),
                b.n_runs.into(),
                b.convergence_fraction.into(),
                b.convergence_stddev.into(),
            ]);
        }
        t
    }

    pub fn games_csv(&self, meta: &CsvMeta) -> CsvTable {
        let mut t = CsvTable::new(
            meta,
            &[
                "setting",
                "game_index",
                "seed",
                "potentialness",
                "n_inits",
                "n_converged",
                "n_pure",
                "mean_iterations",
            ],
        );
        for g in &self.games {
            t.row(vec![
                g.setting.clone().into(),
                g.game_index.into(),
                g.seed.into(),
                g.potentialness.into(),
                g.n_inits.into(),
                g.n_converged.into(),
                g.n_pure.into(),
                g.mean_iterations.into(),
            ]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            settings: vec![GameShape::new(vec![2, 2]).unwrap()],
            samples_per_setting: Some(200),
            master_seed: 11,
            ..Default::default()
        }
    }

    #[test]
    fn bins_partition_the_sample() {
        let cfg = small_cfg();
        let cache = OperatorCache::in_memory();
        let r = run_spne_experiment(&cfg, &cache).unwrap();
        assert_eq!(r.bins.len(), 20);
        assert_eq!(r.bins.iter().map(|b| b.n_games).sum::<usize>(), 200);
        for b in &r.bins {
            assert_eq!(b.spne_fraction.is_none(), b.n_games == 0);
        }
    }

    #[test]
    fn empty_bins_render_null() {
        let cfg = small_cfg();
        let cache = OperatorCache::in_memory();
        let r = run_spne_experiment(&cfg, &cache).unwrap();
        let meta = CsvMeta::for_config(&cfg, cfg.master_seed);
        let csv = r.bins_csv(&meta);
        let empty = r.bins.iter().position(|b| b.n_games == 0);
        if let Some(k) = empty {
            let line = csv.as_str().lines().nth(2 + k).unwrap();
            assert!(line.ends_with(",0,null"), "{line}");
        }
    }

    #[test]
    fn convergence_counts_only_strict_games() {
        let cfg = ExperimentConfig {
            samples_per_setting: Some(60),
            ..small_cfg()
        };
        let cache = OperatorCache::in_memory();
        let r = run_convergence_experiment(&cfg, &cache).unwrap();
        let spne_games: usize = r.bins.iter().map(|b| b.n_spne_games).sum();
        assert_eq!(r.games.len(), spne_games);
        assert_eq!(r.bins.iter().map(|b| b.n_runs).sum::<usize>(), spne_games);
    }
}
