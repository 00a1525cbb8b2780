use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antagonistic")).args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cli(&["no-such-command"])), 2);
    assert_eq!(code(&cli(&["spectrum", "--ensemble", "nonsense"])), 2);
    assert_eq!(code(&cli(&["expect", "--n", "30"])), 2);
    assert_eq!(code(&cli(&["--config", "/nonexistent/config.json", "sample"])), 2);
    assert_eq!(code(&cli(&["--help"])), 0);
}

#[test]
fn expect_reports_exact_and_monte_carlo() {
    let o = cli(&["expect", "--n", "4", "--trials", "20000", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let exact = v["exact"].as_f64().unwrap();
    assert!((exact - 12.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
    assert!(v["z_score"].as_f64().unwrap().abs() <= 4.0);
    assert_eq!(v["functional"], "det");
    assert!(v["mc"]["stderr"].as_f64().unwrap() > 0.0);

    let odd = json(&cli(&["expect", "--n", "5", "--trials", "2000"]));
    assert_eq!(odd["exact"].as_f64(), Some(0.0));

    let mc = json(&cli(&["expect", "--n", "30", "--trials", "200", "--mc-only"]));
    assert!(mc["exact"].is_null());
}

#[test]
fn same_seed_same_bytes() {
    let a = cli(&["sample", "--n", "6", "--seed", "9", "--index", "2"]);
    let b = cli(&["sample", "--n", "6", "--seed", "9", "--index", "2"]);
    let c = cli(&["sample", "--n", "6", "--seed", "9", "--index", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn figure_rows_match_panel_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("small.json");
    std::fs::write(&config, r#"{"n_list": [10, 20, 30]}"#).unwrap();
    let out = dir.path().join("fig3.csv");
    let o = cli(&[
        "--config",
        config.to_str().unwrap(),
        "figure",
        "fig3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 10 + 20 + 30);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    let dims: Vec<u64> = sidecar["panels"].as_array().unwrap().iter().map(|p| p["ensemble"]["n"].as_u64().unwrap()).collect();
    assert_eq!(dims, [10, 20, 30]);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"seed": 5, "n": 7, "format": "json"}"#).unwrap();
    let c = config.to_str().unwrap();

    let from_config = json(&cli(&["--config", c, "sample"]));
    let rows = from_config["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);

    let flagged = cli(&["--config", c, "--seed", "6", "sample", "--n", "3"]);
    let v = json(&flagged);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_ne!(cli(&["--config", c, "sample"]).stdout, cli(&["--config", c, "--seed", "6", "sample"]).stdout);
}

#[test]
fn spectrum_csv_has_one_row_per_eigenvalue() {
    let o = cli(&["spectrum", "--n", "25", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 26);
}

#[test]
fn verify_writes_report_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("closure.json");
    let o = cli(&["verify", "closure", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&out)).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(!v["checks"].as_array().unwrap().is_empty());
}
