//! Seeded experiments and their CSV outputs.

mod alpha;
mod bench;
mod config;
mod csv;
mod random_games;
mod seed;
mod standard;
mod stats;
mod tables;

pub use alpha::{
    run_alpha_sweep, threshold_summary, AlphaRow, AlphaSweepResult, ThresholdSummary,
    THRESHOLD_HIGH, THRESHOLD_LOW,
};
pub use bench::{run_runtime_benchmark, BenchResult, BenchRow};
pub use config::{ExperimentConfig, OutputPaths};
pub use csv::{fmt_f64, fmt_opt, join_floats, Cell, CsvMeta, CsvTable, CODE_VERSION};
pub use random_games::{
    bin_trend, game_seed, run_convergence_experiment, run_distribution_experiment,
    run_spne_experiment, sample_setting, BinStatistics, ConvergenceGame, ConvergenceResult,
    DistributionResult, GameRecord, SettingSummary, SpneResult, SpneSummary,
    TREND_MIN_BIN_GAMES,
};
pub use seed::{derive_seed, setting_id, splitmix64};
pub use standard::{
    named_standard_games, run_standard_games, JordanRow, StandardGameRow, StandardGamesResult,
};
pub use stats::{
    average_ranks, bin_bounds, bin_index, mean, population_stddev, sample_variance, spearman,
    Tally,
};
pub use tables::{bayesian_sweep_csv, econ_sweep_csv};
