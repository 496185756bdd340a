//! Kinematic model of one peristaltic locomotion cycle.
//!
//! A cycle is five actuation phases: anchor the back, extend the center,
//! swap anchors, contract the center, release. Forward cycles pressurize both
//! center chambers; directional cycles pressurize exactly one, and which one
//! depends on the `turn_inverted` calibration flag that models the observed
//! friction-induced reversal of the bending response. Whatever chamber is
//! chosen, the outcome always realizes the intended turn direction.

use crate::geometry::{heading_vec, normalize_angle, Pose};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Left/right in the robot frame (left = counter-clockwise of heading).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// +1 for left (counter-clockwise), −1 for right.
    pub fn turn_sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

/// Which locomotion cycle to run. Directional kinds name the realized turn
/// direction, not the pressurized chamber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleKind {
    Forward,
    DirectionalLeft,
    DirectionalRight,
}

impl CycleKind {
    pub fn directional(side: Side) -> CycleKind {
        match side {
            Side::Left => CycleKind::DirectionalLeft,
            Side::Right => CycleKind::DirectionalRight,
        }
    }

    pub fn turn_side(self) -> Option<Side> {
        match self {
            CycleKind::Forward => None,
            CycleKind::DirectionalLeft => Some(Side::Left),
            CycleKind::DirectionalRight => Some(Side::Right),
        }
    }

    pub fn is_directional(self) -> bool {
        self.turn_side().is_some()
    }
}

/// Pressure setpoints (kPa) held on each chamber for one step of the cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationPhase {
    pub back_radial: f64,
    pub center_left: f64,
    pub center_right: f64,
    pub front_radial: f64,
    pub duration: f64,
}

/// One compiled locomotion cycle: the five-phase sequence for its kind.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitCycle {
    pub phases: Vec<ActuationPhase>,
    pub kind: CycleKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pressures {
    pub back: f64,
    pub center: f64,
    pub front: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Durations {
    pub radial: f64,
    pub center: f64,
}

/// Reference center pressure the bend gain is quoted at.
pub const BEND_REFERENCE_KPA: f64 = 55.0;

/// Hard cap on center-chamber extension.
pub const EXTENSION_CAP_MM: f64 = 40.0;

/// All tuning constants of the locomotion model.
///
/// Defaults reproduce the measured desk-scale behavior: 28/55/42 kPa
/// setpoints, 20 mm center extension at 55 kPa, half of it lost to anchor
/// slip, a 6°-per-cycle bend, and an inverted turn response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitCalibration {
    /// Center-chamber extension per kPa. 20/55 mm/kPa ≈ 0.3636 puts the
    /// forward stroke at 20 mm under the default center pressure.
    pub extension_gain: f64,
    /// Fraction of the stroke lost to imperfect anchoring, in [0, 1).
    pub anchor_slip: f64,
    /// Heading change per directional cycle at the 55 kPa reference.
    pub bend_gain: f64,
    /// Pressurize the same-side chamber instead of the opposite one.
    pub turn_inverted: bool,
    pub pressures: Pressures,
    pub durations: Durations,
    pub max_pressure: f64,
}

impl Default for GaitCalibration {
    fn default() -> Self {
        GaitCalibration {
            extension_gain: 20.0 / 55.0,
            anchor_slip: 0.5,
            bend_gain: 0.105,
            turn_inverted: true,
            pressures: Pressures {
                back: 28.0,
                center: 55.0,
                front: 42.0,
            },
            durations: Durations {
                radial: 1.0,
                center: 2.0,
            },
            max_pressure: 100.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GaitError {
    #[error("pressure {pressure} kPa out of range [0, {max}]")]
    PressureOutOfRange { pressure: f64, max: f64 },
    #[error("invalid calibration: {0}")]
    BadCalibration(&'static str),
}

impl GaitCalibration {
    pub fn validate(&self) -> Result<(), GaitError> {
        let finite = self.extension_gain.is_finite()
            && self.anchor_slip.is_finite()
            && self.bend_gain.is_finite()
            && self.max_pressure.is_finite()
            && self.pressures.back.is_finite()
            && self.pressures.center.is_finite()
            && self.pressures.front.is_finite()
            && self.durations.radial.is_finite()
            && self.durations.center.is_finite();
        if !finite {
            return Err(GaitError::BadCalibration("non-finite field"));
        }
        if self.extension_gain <= 0.0 {
            return Err(GaitError::BadCalibration("extension_gain must be > 0"));
        }
        if !(0.0..1.0).contains(&self.anchor_slip) {
            return Err(GaitError::BadCalibration("anchor_slip must be in [0, 1)"));
        }
        if self.bend_gain <= 0.0 {
            return Err(GaitError::BadCalibration("bend_gain must be > 0"));
        }
        if self.max_pressure <= 0.0 {
            return Err(GaitError::BadCalibration("max_pressure must be > 0"));
        }
        for p in [self.pressures.back, self.pressures.center, self.pressures.front] {
            if !(0.0..=self.max_pressure).contains(&p) {
                return Err(GaitError::BadCalibration(
                    "pressure setpoints must be in [0, max_pressure]",
                ));
            }
        }
        if self.durations.radial <= 0.0 || self.durations.center <= 0.0 {
            return Err(GaitError::BadCalibration("durations must be > 0"));
        }
        Ok(())
    }
}

/// Pose update produced by one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaitOutcome {
    pub new_pose: Pose,
    /// Nose advance along the direction of travel, mm.
    pub net_displacement: f64,
    pub heading_change: f64,
}

/// Linear pressure-to-extension map with a hard cap at 40 mm.
pub fn pressure_to_extension(pressure: f64, calib: &GaitCalibration) -> Result<f64, GaitError> {
    if !pressure.is_finite() || pressure < 0.0 || pressure > calib.max_pressure {
        return Err(GaitError::PressureOutOfRange {
            pressure,
            max: calib.max_pressure,
        });
    }
    Ok(extension_clamped(pressure, calib))
}

fn extension_clamped(pressure: f64, calib: &GaitCalibration) -> f64 {
    (calib.extension_gain * pressure).min(EXTENSION_CAP_MM)
}

/// Which center chamber to pressurize for an intended turn direction.
///
/// Nominally the chamber opposite the intent (the body bends toward the
/// unactuated side); with `turn_inverted` the same-side chamber is used
/// instead. Either way the realized turn matches the intent.
pub fn compile_turn(intent: Side, calib: &GaitCalibration) -> Side {
    if calib.turn_inverted {
        intent
    } else {
        intent.opposite()
    }
}

/// Compile the five-phase actuation sequence for a cycle kind.
pub fn build_cycle(kind: CycleKind, calib: &GaitCalibration) -> GaitCycle {
    let p = calib.pressures;
    let d = calib.durations;
    let (center_left, center_right) = match kind.turn_side() {
        None => (p.center, p.center),
        Some(intent) => match compile_turn(intent, calib) {
            Side::Left => (p.center, 0.0),
            Side::Right => (0.0, p.center),
        },
    };
    let phase = |back, cl, cr, front, duration| ActuationPhase {
        back_radial: back,
        center_left: cl,
        center_right: cr,
        front_radial: front,
        duration,
    };
    GaitCycle {
        phases: vec![
            // anchor back
            phase(p.back, 0.0, 0.0, 0.0, d.radial),
            // extend center while anchored at the back
            phase(p.back, center_left, center_right, 0.0, d.center),
            // anchor front, release back, hold extension
            phase(0.0, center_left, center_right, p.front, d.radial),
            // contract center against the front anchor
            phase(0.0, 0.0, 0.0, p.front, d.center),
            // release front
            phase(0.0, 0.0, 0.0, 0.0, d.radial),
        ],
        kind,
    }
}

/// Peak center-chamber pressure over the cycle (the extension stroke).
fn stroke_pressure(cycle: &GaitCycle) -> f64 {
    cycle
        .phases
        .iter()
        .map(|ph| ph.center_left.max(ph.center_right))
        .fold(0.0, f64::max)
}

/// Apply one cycle to a pose.
///
/// Forward: the nose advances by the extension times (1 − anchor_slip) along
/// the unchanged heading. Directional: the heading turns toward the cycle's
/// realized side by `bend_gain` scaled to the stroke pressure, then the nose
/// advances half a forward stroke along the new heading.
pub fn apply_cycle(pose: Pose, cycle: &GaitCycle, calib: &GaitCalibration) -> GaitOutcome {
    let stroke = stroke_pressure(cycle);
    let extension = extension_clamped(stroke.min(calib.max_pressure), calib);
    let forward_advance = extension * (1.0 - calib.anchor_slip);
    match cycle.kind.turn_side() {
        None => {
            let new_position = pose
                .position
                .add(heading_vec(pose.heading).scale(forward_advance));
            GaitOutcome {
                new_pose: Pose {
                    position: new_position,
                    heading: pose.heading,
                },
                net_displacement: forward_advance,
                heading_change: 0.0,
            }
        }
        Some(side) => {
            let heading_change = side.turn_sign() * calib.bend_gain * (stroke / BEND_REFERENCE_KPA);
            let new_heading = normalize_angle(pose.heading + heading_change);
            let advance = 0.5 * forward_advance;
            let new_position = pose.position.add(heading_vec(new_heading).scale(advance));
            GaitOutcome {
                new_pose: Pose {
                    position: new_position,
                    heading: new_heading,
                },
                net_displacement: advance,
                heading_change,
            }
        }
    }
}
