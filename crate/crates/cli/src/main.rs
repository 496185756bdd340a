use clap::{Parser, Subcommand};
use std::path::PathBuf;
use wormsim_cli::commands::{
    cmd_montecarlo, cmd_plot, cmd_run, cmd_sweep, MonteCarloArgs, PlotArgs, RunArgs, SweepArgs,
};

/// Worm robot simulator: seeded runs, Monte Carlo batches, calibration
/// sweeps and trajectory plots. Exit codes: 0 ok, 1 domain error, 2 I/O.
#[derive(Parser)]
#[command(name = "wormsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write its trajectory CSV.
    Run {
        /// Scenario JSON path.
        #[arg(long)]
        scenario: PathBuf,
        /// Run seed (drives channel loss and sensor noise, if enabled).
        #[arg(long)]
        seed: u64,
        /// Calibration override JSON, merged over defaults.
        #[arg(long)]
        calib: Option<PathBuf>,
        /// Iteration budget (default 500).
        #[arg(long)]
        max_iterations: Option<u32>,
        /// Trajectory CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a batch of randomly generated peg fields.
    Montecarlo {
        /// Pegs per generated scenario.
        #[arg(long, default_value_t = 12)]
        pegs: usize,
        /// Number of runs; scenario i uses seed <seed>+i.
        #[arg(long)]
        runs: u32,
        /// Base seed.
        #[arg(long)]
        seed: u64,
        /// Output directory for run_NNN.csv files and report.json.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Sweep one calibration scalar and report forward displacement.
    Sweep {
        /// Parameter name (e.g. center_pressure, anchor_slip).
        #[arg(long)]
        param: String,
        /// Inclusive range as LO:HI:STEP.
        #[arg(long)]
        range: String,
        /// Table CSV output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw trajectories over the scenario as a standalone SVG.
    Plot {
        /// Scenario JSON path.
        #[arg(long)]
        scenario: PathBuf,
        /// SVG output path.
        #[arg(long)]
        out: PathBuf,
        /// Trajectory CSV paths.
        #[arg(required = true)]
        trajectories: Vec<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { scenario, seed, calib, max_iterations, out } => cmd_run(&RunArgs {
            scenario,
            seed,
            calib,
            max_iterations,
            out,
        }),
        Command::Montecarlo { pegs, runs, seed, out_dir } => cmd_montecarlo(&MonteCarloArgs {
            pegs,
            runs,
            seed,
            out_dir,
        }),
        Command::Sweep { param, range, out } => cmd_sweep(&SweepArgs { param, range, out }),
        Command::Plot { scenario, out, trajectories } => cmd_plot(&PlotArgs {
            scenario,
            out,
            trajectories,
        }),
    };
    match outcome {
        Ok(line) => println!("{line}"),
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
