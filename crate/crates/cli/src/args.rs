use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potlab::econ::EconKind;

#[derive(Debug, Parser)]
#[command(name = "potlab", version, about = "Potentialness of finite games and learning experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed; overrides `master_seed` from the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for cached decomposition operators.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Directory receiving experiment CSVs.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// JSON experiment config. Flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Potentialness of a game read from JSON.
    Decompose(DecomposeArgs),
    /// Run online mirror descent on a game.
    Learn(LearnArgs),
    /// Build a discretized auction or contest, or sweep grid sizes.
    Econ(EconCommand),
    /// Potentialness of induced Bayesian games over type counts.
    Bayesian(BayesianArgs),
    /// Potentialness distribution of random games.
    Dist(ExperimentArgs),
    /// Strict pure equilibrium frequency per potentialness bin.
    Spne(ExperimentArgs),
    /// OMD convergence per potentialness bin.
    Converge(ExperimentArgs),
    /// Convergence along potential/harmonic blends of economic games.
    AlphaSweep(AlphaArgs),
    /// Textbook games and sampled Jordan games.
    Standard(ExperimentArgs),
    /// Runtime of warm potentialness evaluation.
    Bench(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Also print the potential, harmonic and non-strategic payoffs.
    #[arg(long)]
    pub components: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Uniform,
    Random,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub eta0: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = InitKind::Uniform)]
    pub init: InitKind,
    /// Per-iteration loss CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct EconCommand {
    #[command(subcommand)]
    pub sweep: Option<EconSub>,
    #[command(flatten)]
    pub build: EconBuildArgs,
}

#[derive(Debug, Args)]
pub struct EconBuildArgs {
    #[arg(long)]
    pub kind: Option<EconKind>,
    #[arg(long, default_value_t = 2)]
    pub players: usize,
    #[arg(long, default_value_t = 11)]
    pub actions: usize,
    /// Comma-separated valuations, one per player.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Write the generated game as JSON.
    #[arg(long)]
    pub emit_game: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EconSub {
    /// Potentialness and equilibrium counts across grid sizes.
    Sweep(EconSweepArgs),
}

#[derive(Debug, Args)]
pub struct EconSweepArgs {
    /// Kinds to sweep; all five by default.
    #[arg(long, value_delimiter = ',')]
    pub kind: Vec<EconKind>,
    #[arg(long, value_delimiter = ',', default_value = "1.0,1.0")]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub min_actions: usize,
    #[arg(long, default_value_t = 25)]
    pub max_actions: usize,
    /// Output CSV; defaults to `econ_sweep.csv` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BayesianArgs {
    #[arg(long, value_delimiter = ',')]
    pub kind: Vec<EconKind>,
    /// Size of the bid grid, evenly spaced on [0, 0.9].
    #[arg(long, default_value_t = 4)]
    pub actions: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub types: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Overrides for the random-game experiments.
#[derive(Debug, Args, Default)]
pub struct ExperimentArgs {
    /// Comma-separated shapes such as `2x2,2x10`.
    #[arg(long, value_delimiter = ',')]
    pub settings: Option<Vec<String>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub inits: Option<usize>,
    #[arg(long)]
    pub eta0: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub runs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[arg(long, value_delimiter = ',')]
    pub kind: Option<Vec<EconKind>>,
    #[arg(long)]
    pub actions: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub inits: Option<usize>,
}
