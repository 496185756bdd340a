//! Experiment harness around the worm-robot simulator: single runs, seeded
//! Monte Carlo batches, calibration sweeps and SVG trajectory plots.
//!
//! Every command is deterministic given its arguments and produces
//! byte-stable artifacts; batches fan out across threads but collect and
//! write results in run order.

pub mod batch;
pub mod commands;
pub mod error;
pub mod report;
pub mod svg;
pub mod sweep;
