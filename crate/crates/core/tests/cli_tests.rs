use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use korncert::cli::{execute, run_config, RunConfig, RunReport};
use korncert::VerdictTag;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_korncert"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn shipped() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
}

fn config(name: &str) -> PathBuf {
    configs_dir().join(format!("{name}.json"))
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn shipped_configs_reproduce_their_expected_verdicts() {
    let paths = shipped();
    assert!(paths.len() >= 18);
    for path in paths {
        let run = run_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(run.report.meets_expectation(), "{}: got {:?}", path.display(), run.report.tag());
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    let ok = config("sym_grad_ball2_normal");
    assert_eq!(exit_code(bin().args(["check", "--config"]).arg(&ok)), 0);
    assert_eq!(exit_code(bin().args(["check", "--expect", "A1", "--config"]).arg(&ok)), 1);

    let dir = tempfile::tempdir().unwrap();
    let mut cfg: Value = serde_json::from_str(&fs::read_to_string(&ok).unwrap()).unwrap();
    cfg.as_object_mut().unwrap().remove("domain");
    let missing = dir.path().join("missing.json");
    fs::write(&missing, cfg.to_string()).unwrap();
    let out = bin().args(["check", "--config"]).arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));

    let degenerate = dir.path().join("pole.json");
    fs::write(
        &degenerate,
        r#"{"operator": {"builtin": "sym_grad", "n": 3}, "K": 1, "test": "boundary", "trace": "normal",
            "domain": {"n": 3, "radial": {"family": "constant", "c": 1}},
            "coarse": {"counts": [1, 4], "range": [[0, 1e-20], [0, 6.283185307179586]]}}"#,
    )
    .unwrap();
    assert_eq!(exit_code(bin().args(["check", "--config"]).arg(&degenerate)), 3);
    assert_eq!(exit_code(bin().args(["check", "--config"]).arg(dir.path().join("absent.json"))), 2);
}

#[test]
fn reports_are_deterministic() {
    let path = config("dev_sym_grad_ball3_normal");
    let a = run_config(&path).unwrap().report;
    let b = run_config(&path).unwrap().report;
    assert_eq!(a.digest, b.digest);
    let strip = |r: &RunReport| {
        let mut r = r.clone();
        r.timings = Default::default();
        r.to_json_pretty()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a.digest, a.compute_digest());

    let back: RunReport = serde_json::from_str(&a.to_json_pretty()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn seed_variable_overrides_config() {
    let path = config("dev_sym_grad_2d_kernel");
    let out = bin()
        .env("KORNCERT_SEED", "41")
        .args(["check", "--json", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.config.seed, 41);
    let witness = report.ellipticity.witness.unwrap();
    assert_eq!(witness.xi, ["1", "i"]);
    assert_eq!(witness.v, ["1", "-i"]);
}

#[test]
fn kernel_and_probe_subcommands() {
    let out = bin().args(["kernel", "--op", "sym_grad", "--n", "3", "--K", "2", "--json"]).output().unwrap();
    assert!(out.status.success());
    let export: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(export["dim"], 6);
    assert_eq!(export["basis"].as_array().unwrap().len(), 6);

    let out = bin().args(["kernel", "--op", "grad_k", "--order", "3", "--n", "2", "--K", "2"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("dim 12"));

    let out = bin().args(["probe", "--op", "dev_grad", "--n", "3", "--trials", "4"]).output().unwrap();
    let record: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["c_elliptic_evidence"], true);

    assert_eq!(exit_code(bin().args(["kernel", "--op", "curl", "--n", "3", "--K", "1"])), 2);
}

#[test]
fn points_subcommand_requires_a_points_test() {
    assert_eq!(exit_code(bin().args(["points", "--config"]).arg(config("sym_grad_axis_line_points"))), 0);
    assert_eq!(exit_code(bin().args(["points", "--config"]).arg(config("sym_grad_ball2_normal"))), 2);
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn plot_data_for_a_rotation_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let mut run = execute(RunConfig::load(&config("sym_grad_ball2_normal")).unwrap()).unwrap();
    let record = run.emit_plot_data(dir.path()).unwrap();
    assert_eq!(record.files, ["boundary.csv", "residual.csv"]);
    assert_eq!(run.report.plots.as_ref(), Some(&record));
    assert_eq!(run.report.digest, run.report.compute_digest());

    let (header, rows) = read_csv(&dir.path().join("boundary.csv"));
    assert_eq!(header, ["theta1", "x1", "x2", "nu1", "nu2"]);
    assert_eq!(rows.len(), 6);
    for row in &rows {
        assert!((row[1] - row[3]).abs() < 1e-14 && (row[2] - row[4]).abs() < 1e-14);
    }
    let (header, rows) = read_csv(&dir.path().join("residual.csv"));
    assert_eq!(header, ["theta1", "residual1"]);
    assert_eq!(rows.len(), 48);
    assert!(rows.iter().all(|r| r[1] < 1e-14));
}

#[test]
fn plot_data_without_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["check", "--json", "--emit-plots"])
        .arg(dir.path())
        .arg("--config")
        .arg(config("dev_grad_ball2_normal"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.tag(), Some(VerdictTag::A1));
    assert!(dir.path().join("boundary.csv").exists());
    assert!(!dir.path().join("residual.csv").exists());
    assert!(report.plots.unwrap().note.unwrap().contains("residual.csv not written"));
}

#[test]
fn floats_in_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut run = execute(RunConfig::load(&config("sym_grad_sine2_normal")).unwrap()).unwrap();
    run.emit_plot_data(dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("boundary.csv")).unwrap();
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let x: f64 = cell.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), cell);
    }
}

/// Every top-level config key appears in the shipped schema and vice versa.
#[test]
fn schema_lists_every_config_field() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/run-config.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    let mut documented: Vec<String> = schema["properties"].as_object().unwrap().keys().cloned().collect();
    documented.sort();
    let full = r#"{
        "name": "x", "operator": {"builtin": "sym_grad", "n": 2}, "K": 0, "allow_low_degree": true,
        "test": "boundary", "domain": {"n": 2, "radial": {"family": "constant", "c": 1}},
        "trace": "normal", "coarse": {"counts": [4]}, "dense": {"counts": [8]},
        "points": {"explicit": [[0, 0]]}, "tolerances": {}, "seed": 1, "probe_trials": 2,
        "expected": "A1", "output": {"report": "r.json"}
    }"#;
    let cfg = RunConfig::from_json(full).unwrap();
    let mut fields: Vec<String> = serde_json::to_value(&cfg).unwrap().as_object().unwrap().keys().cloned().collect();
    fields.sort();
    assert_eq!(fields, documented);
}
