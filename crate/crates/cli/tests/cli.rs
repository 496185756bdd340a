//! End-to-end tests of the `wormsim` binary: exit codes, artifact contents,
//! command composition and the pinned report schema.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use wormsim::scenario::{generate_scenario, save_scenario, Scenario};
use wormsim::trajectory::CSV_HEADER;

fn scenario_file(dir: &Path) -> PathBuf {
    let path = dir.join("scenario.json");
    std::fs::write(&path, save_scenario(&Scenario::default_template())).unwrap();
    path
}

fn wormsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wormsim"))
        .args(args)
        .output()
        .expect("spawn wormsim")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8(output.stdout.clone()).unwrap();
    let line = text.lines().next().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|e| panic!("stdout {line:?}: {e}"))
}

#[test]
fn run_writes_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let out = tmp.path().join("traj.csv");
    let result = wormsim(&[
        "run",
        "--scenario", scenario.to_str().unwrap(),
        "--seed", "1",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    let summary = stdout_json(&result);
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["outcome"], "reached");
    assert_eq!(summary["iterations"], 100);
}

#[test]
fn run_missing_scenario_is_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let result = wormsim(&[
        "run",
        "--scenario", "/nonexistent/scenario.json",
        "--seed", "1",
        "--out", tmp.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
    assert!(!result.stderr.is_empty());
}

#[test]
fn run_invalid_scenario_is_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, "{\"arena\":").unwrap();
    let result = wormsim(&[
        "run",
        "--scenario", bad.to_str().unwrap(),
        "--seed", "1",
        "--out", tmp.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("byte"), "stderr: {stderr}");
}

#[test]
fn run_twice_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let (a, b) = (tmp.path().join("a.csv"), tmp.path().join("b.csv"));
    for out in [&a, &b] {
        let result = wormsim(&[
            "run",
            "--scenario", scenario.to_str().unwrap(),
            "--seed", "42",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(result.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn run_honors_max_iterations() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let out = tmp.path().join("short.csv");
    let result = wormsim(&[
        "run",
        "--scenario", scenario.to_str().unwrap(),
        "--seed", "1",
        "--max-iterations", "10",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let summary = stdout_json(&result);
    assert_eq!(summary["outcome"], "timeout");
    assert_eq!(summary["iterations"], 10);
}

#[test]
fn run_accepts_calibration_override() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let calib = tmp.path().join("calib.json");
    std::fs::write(&calib, r#"{"anchor_slip": 0.0}"#).unwrap();
    let out = tmp.path().join("fast.csv");
    let result = wormsim(&[
        "run",
        "--scenario", scenario.to_str().unwrap(),
        "--seed", "1",
        "--calib", calib.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    // no slip doubles the stroke: 20 mm per iteration, reach in 50
    assert_eq!(stdout_json(&result)["iterations"], 50);
}

#[test]
fn montecarlo_empty_arena_histogram() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("mc");
    let result = wormsim(&[
        "montecarlo",
        "--pegs", "0",
        "--runs", "5",
        "--seed", "9",
        "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let histogram = stdout_json(&result);
    assert_eq!(histogram["reached"], 5);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["histogram"]["reached"], 5);
    for i in 0..5 {
        assert!(out_dir.join(format!("run_{i:03}.csv")).exists());
    }
}

#[test]
fn montecarlo_single_run_equals_cmd_run() {
    // a one-run batch and a direct run of the same generated scenario with
    // the same seed must produce identical trajectory bytes
    let tmp = tempfile::tempdir().unwrap();
    let seed = 4242u64;
    let out_dir = tmp.path().join("mc");
    let result = wormsim(&[
        "montecarlo",
        "--pegs", "12",
        "--runs", "1",
        "--seed", &seed.to_string(),
        "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success());

    let generated = generate_scenario(seed, 12, &Scenario::default_template()).unwrap();
    let scenario_path = tmp.path().join("generated.json");
    std::fs::write(&scenario_path, save_scenario(&generated)).unwrap();
    let direct = tmp.path().join("direct.csv");
    let run_result = wormsim(&[
        "run",
        "--scenario", scenario_path.to_str().unwrap(),
        "--seed", &seed.to_string(),
        "--out", direct.to_str().unwrap(),
    ]);
    assert!(run_result.status.success());

    assert_eq!(
        std::fs::read(out_dir.join("run_000.csv")).unwrap(),
        std::fs::read(&direct).unwrap()
    );
}

#[test]
fn montecarlo_over_dense_counted_not_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("mc");
    let result = wormsim(&[
        "montecarlo",
        "--pegs", "500",
        "--runs", "2",
        "--seed", "1",
        "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["skipped_overdense"], 2);
    assert_eq!(report["histogram"]["reached"], 0);
}

#[test]
fn montecarlo_report_matches_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("mc");
    let result = wormsim(&[
        "montecarlo",
        "--pegs", "0",
        "--runs", "2",
        "--seed", "7",
        "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let report = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
    assert_eq!(report, include_str!("golden/mc_report.json"));
}

#[test]
fn sweep_writes_table_and_argmax() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sweep.csv");
    let result = wormsim(&[
        "sweep",
        "--param", "center_pressure",
        "--range", "30:70:10",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("value,objective\n"));
    assert_eq!(table.lines().count(), 6);
    let argmax = stdout_json(&result);
    assert_eq!(argmax["param"], "center_pressure");
    assert_eq!(argmax["argmax"], 70.0);
}

#[test]
fn sweep_unknown_param_is_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    let result = wormsim(&[
        "sweep",
        "--param", "frobnication",
        "--range", "0:1:0.1",
        "--out", tmp.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn plot_counts_polylines() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let mut csvs = Vec::new();
    for seed in 0..5 {
        let out = tmp.path().join(format!("t{seed}.csv"));
        let result = wormsim(&[
            "run",
            "--scenario", scenario.to_str().unwrap(),
            "--seed", &seed.to_string(),
            "--out", out.to_str().unwrap(),
        ]);
        assert!(result.status.success());
        csvs.push(out);
    }
    let svg_path = tmp.path().join("plot.svg");
    let mut args = vec![
        "plot".to_string(),
        "--scenario".into(), scenario.to_str().unwrap().into(),
        "--out".into(), svg_path.to_str().unwrap().into(),
    ];
    args.extend(csvs.iter().map(|p| p.to_str().unwrap().to_string()));
    let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let result = wormsim(&arg_refs);
    assert!(result.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
}

#[test]
fn plot_rejects_schema_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "time,x,y\n0,1,2\n").unwrap();
    let result = wormsim(&[
        "plot",
        "--scenario", scenario.to_str().unwrap(),
        "--out", tmp.path().join("p.svg").to_str().unwrap(),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn plot_missing_trajectory_is_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_file(tmp.path());
    let result = wormsim(&[
        "plot",
        "--scenario", scenario.to_str().unwrap(),
        "--out", tmp.path().join("p.svg").to_str().unwrap(),
        "/nonexistent/traj.csv",
    ]);
    assert_eq!(result.status.code(), Some(2));
}
