//! Deterministic 2-D simulator and controller for a three-segment peristaltic
//! worm robot that seeks a light source in a peg-field arena using only
//! onboard sensing: two phototransistor eyes and two contact strips.
//!
//! The crate is organized around the physical system:
//!
//! - [`geometry`] / [`scenario`]: the planar world (arena, pegs, light, poses)
//! - [`gait`]: the five-phase peristaltic cycle and its calibration
//! - [`sensing`]: nose-cone light and contact models
//! - [`telemetry`]: the 10-byte sensor frame and the simulated lossy link
//! - [`controller`]: the contact-over-light reactive decision rule
//! - [`simulator`]: the closed loop, collision resolution, run outcomes
//! - [`trajectory`]: the byte-stable trajectory CSV interface
//!
//! Everything is deterministic given explicit 64-bit seeds; see [`rng`].

pub mod calibration;
pub mod controller;
pub mod gait;
pub mod geometry;
pub mod rng;
pub mod scenario;
pub mod sensing;
pub mod simulator;
pub mod telemetry;
pub mod trajectory;

pub use calibration::Calibration;
pub use geometry::{Pose, Vec2};
pub use scenario::Scenario;
pub use simulator::{run, Outcome, RunResult, SimConfig};
pub use telemetry::ChannelConfig;
