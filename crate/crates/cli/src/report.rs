//! JSON report schemas for single runs and Monte Carlo batches. The schema
//! version is pinned by golden-file tests; bump it when a field changes.

use serde::{Deserialize, Serialize};
use wormsim::simulator::{Outcome, RunResult};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One-line summary of a single run, printed to stdout by `wormsim run`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunSummary {
    pub schema_version: u32,
    pub outcome: Outcome,
    pub iterations: u32,
    pub final_distance_mm: f64,
    pub progress_mean_mm: Option<f64>,
    pub progress_std_mm: Option<f64>,
    pub wedged_iterations: usize,
}

impl RunSummary {
    pub fn from_result(result: &RunResult) -> RunSummary {
        RunSummary {
            schema_version: REPORT_SCHEMA_VERSION,
            outcome: result.outcome,
            iterations: result.iterations_used,
            final_distance_mm: result
                .trajectory
                .last()
                .map(|s| s.distance_to_target)
                .unwrap_or(f64::NAN),
            progress_mean_mm: result.progress_per_iteration.map(|p| p.mean),
            progress_std_mm: result.progress_per_iteration.map(|p| p.std),
            wedged_iterations: result.wedged_iterations.len(),
        }
    }
}

/// Outcome histogram; a partition of the executed runs.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct OutcomeHistogram {
    pub reached: u32,
    pub diverged: u32,
    pub stuck: u32,
    pub timeout: u32,
}

impl OutcomeHistogram {
    pub fn add(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Reached => self.reached += 1,
            Outcome::Diverged => self.diverged += 1,
            Outcome::Stuck => self.stuck += 1,
            Outcome::Timeout => self.timeout += 1,
        }
    }

    pub fn total(&self) -> u32 {
        self.reached + self.diverged + self.stuck + self.timeout
    }
}

/// Per-run entry of the batch report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub index: u32,
    pub scenario_seed: u64,
    pub outcome: Outcome,
    pub iterations: u32,
    pub final_distance_mm: f64,
    pub progress_mean_mm: Option<f64>,
    pub progress_std_mm: Option<f64>,
    pub wedged_iterations: usize,
    pub csv: String,
}

/// The whole batch: histogram, pooled progress statistics, seed manifest.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BatchReport {
    pub schema_version: u32,
    pub base_seed: u64,
    pub peg_count: usize,
    pub runs_requested: u32,
    pub histogram: OutcomeHistogram,
    pub skipped_overdense: u32,
    pub aggregate_progress_mean_mm: Option<f64>,
    pub aggregate_progress_std_mm: Option<f64>,
    pub scenario_seeds: Vec<u64>,
    pub runs: Vec<RunRecord>,
}

pub fn to_json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialization")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}
