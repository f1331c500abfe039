use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn potlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potlab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = potlab(args, cwd);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_body(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(String::from)
        .collect()
}

const PENNIES: &str = r#"{"players":2,"actions":[2,2],"payoffs":[[1,-1,-1,1],[-1,1,1,-1]]}"#;

#[test]
fn decompose_prints_potentialness_and_components() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("mp.json"), PENNIES).unwrap();
    let v: Value =
        serde_json::from_str(&ok(&["decompose", "--game", "mp.json", "--components", "--cache", "ops"], dir.path()))
            .unwrap();
    assert!(v["potentialness"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["components"]["harmonic"]["actions"], serde_json::json!([2, 2]));
    assert!(dir.path().join("ops").read_dir().unwrap().count() > 0);
}

#[test]
fn learn_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let pd = r#"{"players":2,"actions":[2,2],"payoffs":[[-1,-3,0,-2],[-1,0,-3,-2]]}"#;
    std::fs::write(dir.path().join("pd.json"), pd).unwrap();
    let v: Value = serde_json::from_str(&ok(
        &["learn", "--game", "pd.json", "--iters", "2000", "--trace", "t.csv"],
        dir.path(),
    ))
    .unwrap();
    assert_eq!(v["converged"], Value::Bool(true));
    assert_eq!(v["pure_equilibrium"], serde_json::json!([1, 1]));
    let lines = csv_body(&dir.path().join("t.csv"));
    assert!(lines[0].starts_with("# potlab "));
    assert_eq!(lines[1], "iteration,loss");
    assert_eq!(lines.len() - 2, v["iterations_used"].as_u64().unwrap() as usize);
}

#[test]
fn econ_build_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let v: Value = serde_json::from_str(&ok(
        &["econ", "--kind", "allpay", "--actions", "6", "--values", "1.0,1.0", "--emit-game", "g.json"],
        dir.path(),
    ))
    .unwrap();
    assert_eq!(v["pure_ne"], serde_json::json!([]));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(g["actions"], serde_json::json!([6, 6]));

    ok(
        &["econ", "sweep", "--kind", "spsb", "--min-actions", "5", "--max-actions", "6", "--out", "s.csv"],
        dir.path(),
    );
    let lines = csv_body(&dir.path().join("s.csv"));
    assert_eq!(lines[1], "kind,n_actions,valuations,potentialness,n_pure_ne,n_strict_ne");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("spsb,5,"));
}

#[test]
fn bayesian_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["bayesian", "--kind", "allpay", "--actions", "4", "--types", "1,4", "--out", "b.csv"], dir.path());
    let lines = csv_body(&dir.path().join("b.csv"));
    assert_eq!(lines[1], "kind,n_types,n_strategies,potentialness,has_pure_bne");
    assert!(lines[3].starts_with("allpay,4,35,"));
}

#[test]
fn experiments_are_byte_reproducible_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str, jobs: &'static str| {
        vec!["dist", "--settings", "2x2,2x3", "--samples", "150", "--seed", "11", "--out-dir", out, "--jobs", jobs]
    };
    ok(&args("a", "1"), dir.path());
    ok(&args("b", "2"), dir.path());
    for f in ["distribution_games.csv", "distribution_summary.csv"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
    let lines = csv_body(&dir.path().join("a/distribution_games.csv"));
    assert!(lines[0].ends_with("seed=11"));
    assert_eq!(lines[1], "setting,game_index,seed,potentialness,has_pure_ne,has_spne");
    assert_eq!(lines.len(), 2 + 300);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"settings": [[2,2]], "samples_per_setting": 50, "master_seed": 4, "out_dir": "from_file"}"#,
    )
    .unwrap();
    ok(&["spne", "--config", "cfg.json"], dir.path());
    let lines = csv_body(&dir.path().join("from_file/spne_summary.csv"));
    assert!(lines[0].ends_with("seed=4"));
    assert!(lines[2].starts_with("2x2,50,"));

    ok(&["spne", "--config", "cfg.json", "--seed", "5", "--samples", "60", "--out-dir", "flags"], dir.path());
    let lines = csv_body(&dir.path().join("flags/spne_summary.csv"));
    assert!(lines[0].ends_with("seed=5"));
    assert!(lines[2].starts_with("2x2,60,"));
    let bins = csv_body(&dir.path().join("flags/spne_bins.csv"));
    assert_eq!(bins.len(), 2 + 20);
}

#[test]
fn invalid_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"bins": 0}"#).unwrap();
    assert!(!potlab(&["dist", "--config", "bad.json"], dir.path()).status.success());
    std::fs::write(dir.path().join("unknown.json"), r#"{"bogus": 1}"#).unwrap();
    assert!(!potlab(&["dist", "--config", "unknown.json"], dir.path()).status.success());
    assert!(!potlab(&["dist", "--settings", "2x"], dir.path()).status.success());
    assert!(!potlab(&["econ"], dir.path()).status.success());
    assert!(!potlab(&["decompose", "--game", "missing.json"], dir.path()).status.success());
}

#[test]
fn standard_and_bench_write_csvs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["standard", "--out-dir", "o", "--runs", "10"], dir.path());
    let games = csv_body(&dir.path().join("o/standard_games.csv"));
    assert_eq!(games[1], "game,shape,potentialness,converged,reached_pure_ne,iterations,final_loss");
    assert_eq!(games.len(), 2 + 4);
    assert_eq!(csv_body(&dir.path().join("o/jordan_games.csv")).len(), 2 + 10);

    ok(&["bench", "--settings", "2x5", "--runs", "5", "--out-dir", "o"], dir.path());
    let rt = csv_body(&dir.path().join("o/runtime.csv"));
    assert!(rt[2].starts_with("2x5,5,"));
}
