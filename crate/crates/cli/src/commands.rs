//! The four subcommands behind the `wormsim` binary. Each returns the text it
//! prints to stdout so tests can drive them without spawning processes.

use crate::batch::{run_batch, trajectory_csvs, BatchConfig};
use crate::error::{read_file, write_file, CliError};
use crate::report::{to_json_line, to_json_pretty, RunSummary};
use crate::svg;
use crate::sweep::{run_sweep, sweep_csv, SweepSpec};
use std::path::{Path, PathBuf};
use wormsim::calibration::Calibration;
use wormsim::scenario::load_scenario;
use wormsim::simulator::{run, SimConfig};
use wormsim::telemetry::ChannelConfig;
use wormsim::trajectory::{read_csv, write_csv};

pub struct RunArgs {
    pub scenario: PathBuf,
    pub seed: u64,
    pub calib: Option<PathBuf>,
    pub max_iterations: Option<u32>,
    pub out: PathBuf,
}

/// `run`: one scenario, one seed, trajectory CSV out, summary JSON line back.
pub fn cmd_run(args: &RunArgs) -> Result<String, CliError> {
    let scenario = load_scenario(&read_file(&args.scenario)?)
        .map_err(|e| CliError::Domain(format!("scenario {}: {e}", args.scenario.display())))?;
    let calib = match &args.calib {
        None => Calibration::default(),
        Some(path) => Calibration::from_json(&read_file(path)?)
            .map_err(|e| CliError::Domain(format!("calibration {}: {e}", path.display())))?,
    };
    let sim = SimConfig {
        seed: args.seed,
        max_iterations: args.max_iterations.unwrap_or(SimConfig::default().max_iterations),
        ..SimConfig::default()
    };
    let result = run(&scenario, &calib, &ChannelConfig::default(), &sim)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    write_file(&args.out, &write_csv(&result.trajectory))?;
    Ok(to_json_line(&RunSummary::from_result(&result)))
}

pub struct MonteCarloArgs {
    pub pegs: usize,
    pub runs: u32,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// `montecarlo`: scenario i from seed base+i, per-run CSVs plus report.json.
pub fn cmd_montecarlo(args: &MonteCarloArgs) -> Result<String, CliError> {
    if args.runs == 0 {
        return Err(CliError::Domain("runs must be at least 1".into()));
    }
    let cfg = BatchConfig {
        peg_count: args.pegs,
        runs: args.runs,
        base_seed: args.seed,
        calib: Calibration::default(),
        channel: ChannelConfig::default(),
        sim: SimConfig::default(),
    };
    let entries = run_batch(&cfg);
    let csv_name = |i: u32| format!("run_{i:03}.csv");
    let report = crate::batch::build_report(&cfg, &entries, csv_name);

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", args.out_dir.display())))?;
    for (index, csv) in trajectory_csvs(&entries) {
        write_file(&args.out_dir.join(csv_name(index)), &csv)?;
    }
    write_file(&args.out_dir.join("report.json"), &to_json_pretty(&report))?;
    Ok(to_json_line(&report.histogram))
}

pub struct SweepArgs {
    pub param: String,
    pub range: String,
    pub out: PathBuf,
}

/// `sweep`: objective table to CSV, argmax as the stdout JSON line.
pub fn cmd_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let spec = SweepSpec::parse(&args.param, &args.range)?;
    let result = run_sweep(&spec)?;
    write_file(&args.out, &sweep_csv(&result))?;
    Ok(format!(
        "{{\"param\":{},\"argmax\":{},\"objective\":{}}}",
        serde_json::to_string(&spec.param).expect("string"),
        result.argmax_value,
        result.argmax_objective
    ))
}

pub struct PlotArgs {
    pub scenario: PathBuf,
    pub out: PathBuf,
    pub trajectories: Vec<PathBuf>,
}

/// `plot`: scenario plus trajectory CSVs to one SVG.
pub fn cmd_plot(args: &PlotArgs) -> Result<String, CliError> {
    let scenario = load_scenario(&read_file(&args.scenario)?)
        .map_err(|e| CliError::Domain(format!("scenario {}: {e}", args.scenario.display())))?;
    let mut runs = Vec::new();
    for path in &args.trajectories {
        let samples = read_csv(&read_file(path)?)
            .map_err(|e| CliError::Domain(format!("trajectory {}: {e}", path.display())))?;
        runs.push(samples);
    }
    write_file(&args.out, &svg::render(&scenario, &runs))?;
    Ok(format!(
        "{{\"trajectories\":{},\"svg\":{}}}",
        runs.len(),
        serde_json::to_string(&args.out.display().to_string()).expect("string")
    ))
}

/// Shared helper for tests: default scenario written to a path.
pub fn write_default_scenario(path: &Path) -> Result<(), CliError> {
    let scenario = wormsim::Scenario::default_template();
    write_file(path, &wormsim::scenario::save_scenario(&scenario))
}
