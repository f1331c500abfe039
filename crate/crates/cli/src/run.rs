use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use potlab::bayesian::{bayesian_potentialness_sweep, DEFAULT_BAYES_GRID};
use potlab::dynamics::{random_init, run_omd, uniform_init, OMDConfig};
use potlab::econ::{build_econ_game, discretization_sweep, EconGameSpec, EconKind};
use potlab::game::{pure_equilibria, GameJson, GameShape, NormalFormGame};
use potlab::harness::{self, CsvMeta, CsvTable, ExperimentConfig, OutputPaths};
use potlab::hodge::{decompose_payoffs, OperatorCache};
use serde_json::{json, Value};

use crate::args::*;

/// Print to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Keys accepted in the config file besides the experiment fields.
const RUN_KEYS: [&str; 3] = ["cache", "out_dir", "jobs"];

struct Context_ {
    cfg: ExperimentConfig,
    cache: OperatorCache<f64>,
    out: OutputPaths,
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let g = cli.global;
    let (mut cfg, file_run) = match &g.config {
        Some(path) => load_config(path)?,
        None => (ExperimentConfig::default(), Value::Null),
    };
    if let Some(seed) = g.seed {
        cfg.master_seed = seed;
    }
    let cache_dir = g
        .cache
        .clone()
        .or_else(|| file_run.get("cache").and_then(Value::as_str).map(PathBuf::from));
    let out_dir = g
        .out_dir
        .clone()
        .or_else(|| file_run.get("out_dir").and_then(Value::as_str).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let jobs = g
        .jobs
        .or_else(|| file_run.get("jobs").and_then(Value::as_u64).map(|n| n as usize));
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }

    let mut ctx = Context_ {
        cache: OperatorCache::new(cache_dir, cfg.limits),
        cfg,
        out: OutputPaths::new(out_dir),
    };
    match cli.command {
        Command::Decompose(a) => decompose(&ctx, a),
        Command::Learn(a) => learn(&ctx, a),
        Command::Econ(a) => match a.sweep {
            Some(EconSub::Sweep(s)) => econ_sweep(&ctx, s),
            None => econ_build(&ctx, a.build),
        },
        Command::Bayesian(a) => bayesian(&ctx, a),
        Command::Dist(a) => {
            apply_overrides(&mut ctx, &a)?;
            dist(&ctx)
        }
        Command::Spne(a) => {
            apply_overrides(&mut ctx, &a)?;
            spne(&ctx)
        }
        Command::Converge(a) => {
            apply_overrides(&mut ctx, &a)?;
            converge(&ctx)
        }
        Command::AlphaSweep(a) => {
            apply_alpha_overrides(&mut ctx, a)?;
            alpha(&ctx)
        }
        Command::Standard(a) => {
            apply_overrides(&mut ctx, &a)?;
            standard(&ctx)
        }
        Command::Bench(a) => {
            apply_overrides(&mut ctx, &a)?;
            bench(&ctx)
        }
    }
}

fn load_config(path: &Path) -> Result<(ExperimentConfig, Value)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut doc: Value = serde_json::from_str(&text).context("parsing config JSON")?;
    let obj = doc
        .as_object_mut()
        .context("config must be a JSON object")?;
    let mut run = serde_json::Map::new();
    for k in RUN_KEYS {
        if let Some(v) = obj.remove(k) {
            run.insert(k.into(), v);
        }
    }
    let cfg = ExperimentConfig::from_json_str(&doc.to_string())?;
    Ok((cfg, Value::Object(run)))
}

fn parse_shape(s: &str) -> Result<GameShape> {
    let actions = s
        .split('x')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad shape `{s}`; expected e.g. 2x3"))?;
    Ok(GameShape::new(actions)?)
}

fn apply_overrides(ctx: &mut Context_, a: &ExperimentArgs) -> Result<()> {
    let cfg = &mut ctx.cfg;
    if let Some(s) = &a.settings {
        cfg.settings = s.iter().map(|x| parse_shape(x)).collect::<Result<_>>()?;
    }
    if a.samples.is_some() {
        cfg.samples_per_setting = a.samples;
    }
    if let Some(b) = a.bins {
        cfg.bins = b;
    }
    if let Some(n) = a.inits {
        cfg.num_random_inits = n;
    }
    if let Some(x) = a.eta0 {
        cfg.omd.eta0 = x;
    }
    if let Some(x) = a.beta {
        cfg.omd.beta = x;
    }
    if let Some(x) = a.iters {
        cfg.omd.max_iters = x;
    }
    if let Some(x) = a.tol {
        cfg.omd.tolerance = x;
    }
    if let Some(x) = a.runs {
        cfg.bench_runs = x;
        cfg.jordan_samples = x;
    }
    cfg.validate()?;
    Ok(())
}

fn apply_alpha_overrides(ctx: &mut Context_, a: AlphaArgs) -> Result<()> {
    let cfg = &mut ctx.cfg;
    if let Some(k) = a.kind {
        cfg.kinds = k;
    }
    if let Some(m) = a.actions {
        cfg.alpha_actions = m;
    }
    if let Some(v) = a.values {
        cfg.alpha_valuations = v;
    }
    if let Some(s) = a.steps {
        cfg.alpha_steps = s;
    }
    if let Some(n) = a.inits {
        cfg.alpha_inits = n;
    }
    cfg.validate()?;
    Ok(())
}

fn meta(ctx: &Context_) -> CsvMeta {
    CsvMeta::for_config(&ctx.cfg, ctx.cfg.master_seed)
}

fn write(ctx: &Context_, name: &str, table: &CsvTable) -> Result<()> {
    let path = ctx.out.file(name);
    table
        .write_to(&path)
        .with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn read_game(path: &Path) -> Result<NormalFormGame<f64>> {
    NormalFormGame::read_json(path).with_context(|| format!("reading game {}", path.display()))
}

fn decompose(ctx: &Context_, a: DecomposeArgs) -> Result<()> {
    let g = read_game(&a.game)?;
    let ops = ctx.cache.get(g.shape())?;
    let dec = decompose_payoffs(&ops, &g)?;
    let mut out = json!({
        "shape": g.shape().actions(),
        "potentialness": dec.potentialness.value(),
        "non_strategic": dec.potentialness.is_non_strategic(),
        "potential_flow_norm": dec.potential_flow.norm(),
        "harmonic_flow_norm": dec.harmonic_flow.norm(),
    });
    if a.components {
        let c = dec.components.as_ref().context("components missing")?;
        out["components"] = json!({
            "potential": GameJson::from(&c.potential),
            "harmonic": GameJson::from(&c.harmonic),
            "non_strategic": GameJson::from(&c.non_strategic),
        });
    }
    out!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn learn(ctx: &Context_, a: LearnArgs) -> Result<()> {
    let g = read_game(&a.game)?;
    let base = ctx.cfg.omd.clone();
    let cfg = OMDConfig {
        eta0: a.eta0.unwrap_or(base.eta0),
        beta: a.beta.unwrap_or(base.beta),
        max_iters: a.iters.unwrap_or(base.max_iters),
        tolerance: a.tol.unwrap_or(base.tolerance),
    };
    let init = match a.init {
        InitKind::Uniform => uniform_init(g.shape()),
        InitKind::Random => random_init(g.shape(), ctx.cfg.master_seed),
    };
    let tr = run_omd(&g, &init, &cfg)?;
    if let Some(path) = &a.trace {
        let m = CsvMeta::for_config(&cfg, ctx.cfg.master_seed);
        let mut t = CsvTable::new(&m, &["iteration", "loss"]);
        for (i, &l) in tr.loss_history.iter().enumerate() {
            t.row(vec![(i + 1).into(), l.into()]);
        }
        t.write_to(path)?;
    }
    let summary = json!({
        "converged": tr.converged,
        "iterations_used": tr.iterations_used,
        "final_loss": tr.final_loss(),
        "final_profile": tr.final_profile.strategies(),
        "pure_equilibrium": tr.pure_equilibrium,
    });
    out!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn econ_build(ctx: &Context_, a: EconBuildArgs) -> Result<()> {
    let Some(kind) = a.kind else {
        bail!("--kind is required (or use `econ sweep`)");
    };
    let values = a.values.unwrap_or_else(|| vec![1.0; a.players]);
    if values.len() != a.players {
        bail!("{} valuations given for {} players", values.len(), a.players);
    }
    let spec = EconGameSpec::new(kind, values, vec![a.actions; a.players])?;
    let g = build_econ_game::<f64>(&spec)?;
    if let Some(path) = &a.emit_game {
        g.write_json(path)?;
    }
    let ops = ctx.cache.get(g.shape())?;
    let dec = decompose_payoffs(&ops, &g)?;
    let report = pure_equilibria(&g);
    let out = json!({
        "kind": kind.name(),
        "shape": g.shape().actions(),
        "valuations": spec.valuations,
        "potentialness": dec.potentialness.value(),
        "pure_ne": report.pure_ne,
        "strict_pure_ne": report.strict_pure_ne,
    });
    out!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn kinds_or_all(k: Vec<EconKind>) -> Vec<EconKind> {
    if k.is_empty() {
        EconKind::ALL.to_vec()
    } else {
        k
    }
}

fn econ_sweep(ctx: &Context_, a: EconSweepArgs) -> Result<()> {
    if a.min_actions < 2 || a.max_actions < a.min_actions {
        bail!("need 2 <= min-actions <= max-actions");
    }
    let kinds = kinds_or_all(a.kind);
    let counts: Vec<usize> = (a.min_actions..=a.max_actions).collect();
    let mut rows = Vec::new();
    for &kind in &kinds {
        rows.extend(discretization_sweep(&ctx.cache, kind, &a.values, &counts)?);
    }
    let params = json!({"kinds": kinds, "values": a.values, "actions": counts});
    let table = harness::econ_sweep_csv(&rows, &CsvMeta::for_config(&params, ctx.cfg.master_seed));
    match &a.out {
        Some(p) => {
            table.write_to(p)?;
            eprintln!("wrote {}", p.display());
            Ok(())
        }
        None => write(ctx, "econ_sweep.csv", &table),
    }
}

fn bayes_grid(actions: usize) -> Result<Vec<f64>> {
    if actions < 2 {
        bail!("need at least 2 actions");
    }
    if actions == DEFAULT_BAYES_GRID.len() {
        return Ok(DEFAULT_BAYES_GRID.to_vec());
    }
    Ok((0..actions)
        .map(|k| 0.9 * k as f64 / (actions - 1) as f64)
        .collect())
}

fn bayesian(ctx: &Context_, a: BayesianArgs) -> Result<()> {
    let kinds = kinds_or_all(a.kind);
    let grid = bayes_grid(a.actions)?;
    let mut rows = Vec::new();
    for &kind in &kinds {
        rows.extend(bayesian_potentialness_sweep(&ctx.cache, kind, &grid, &a.types)?);
    }
    let params = json!({"kinds": kinds, "grid": grid, "types": a.types});
    let table =
        harness::bayesian_sweep_csv(&rows, &CsvMeta::for_config(&params, ctx.cfg.master_seed));
    match &a.out {
        Some(p) => {
            table.write_to(p)?;
            eprintln!("wrote {}", p.display());
            Ok(())
        }
        None => write(ctx, "bayesian.csv", &table),
    }
}

fn show(x: Option<f64>) -> String {
    x.map_or_else(|| "null".into(), |v| format!("{v:.4}"))
}

fn dist(ctx: &Context_) -> Result<()> {
    let r = harness::run_distribution_experiment(&ctx.cfg, &ctx.cache)?;
    let m = meta(ctx);
    write(ctx, "distribution_games.csv", &r.games_csv(&m))?;
    write(ctx, "distribution_summary.csv", &r.summary_csv(&m))?;
    for s in &r.summaries {
        out!(
            "{}: n={} mean={} var={} pure_ne={} spne={}",
            s.setting,
            s.n_games,
            show(s.mean_potentialness),
            show(s.variance_potentialness),
            show(s.pure_ne_fraction),
            show(s.spne_fraction)
        );
    }
    Ok(())
}

fn spne(ctx: &Context_) -> Result<()> {
    let r = harness::run_spne_experiment(&ctx.cfg, &ctx.cache)?;
    let m = meta(ctx);
    write(ctx, "spne_bins.csv", &r.bins_csv(&m))?;
    write(ctx, "spne_summary.csv", &r.summary_csv(&m))?;
    for s in &r.summaries {
        out!(
            "{}: spne={} spearman={}",
            s.setting,
            show(s.spne_fraction),
            show(s.spearman)
        );
    }
    Ok(())
}

fn converge(ctx: &Context_) -> Result<()> {
    let r = harness::run_convergence_experiment(&ctx.cfg, &ctx.cache)?;
    let m = meta(ctx);
    write(ctx, "convergence_bins.csv", &r.bins_csv(&m))?;
    write(ctx, "convergence_games.csv", &r.games_csv(&m))?;
    Ok(())
}

fn alpha(ctx: &Context_) -> Result<()> {
    let r = harness::run_alpha_sweep(&ctx.cfg, &ctx.cache)?;
    let m = meta(ctx);
    write(ctx, "alpha_sweep.csv", &r.csv(&m))?;
    write(ctx, "alpha_thresholds.csv", &r.thresholds_csv(&m))?;
    for t in r.thresholds() {
        out!(
            "{}: convergence threshold {:?}, spne threshold {:?}, step shape {}",
            t.kind, t.convergence_alpha, t.spne_alpha, t.step_shape
        );
    }
    Ok(())
}

fn standard(ctx: &Context_) -> Result<()> {
    let r = harness::run_standard_games(&ctx.cfg, &ctx.cache)?;
    let m = meta(ctx);
    write(ctx, "standard_games.csv", &r.games_csv(&m))?;
    write(ctx, "jordan_games.csv", &r.jordan_csv(&m))?;
    for g in &r.games {
        out!(
            "{}: potentialness={} converged={} pure_ne={}",
            g.game,
            show(g.potentialness),
            g.converged,
            g.reached_pure_ne
        );
    }
    Ok(())
}

fn bench(ctx: &Context_) -> Result<()> {
    let start = Instant::now();
    let r = harness::run_runtime_benchmark(&ctx.cfg, &ctx.cfg.settings)?;
    write(ctx, "runtime.csv", &r.csv(&meta(ctx)))?;
    for row in &r.rows {
        out!(
            "{}: construction {:.3}s, potentialness {:.3e}s +- {:.1e}s",
            row.setting, row.construction_seconds, row.mean_seconds, row.stddev_seconds
        );
    }
    log::info!("bench finished in {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
