//! Run calibration bundle: gait constants, nose-cone sensor geometry and the
//! controller deadband, with JSON overrides merged over defaults.
//!
//! Override files are partial: any omitted field keeps its default, unknown
//! fields are rejected. Gait fields sit at the top level; sensor fields under
//! `"nose"`.

use crate::controller::ControllerConfig;
use crate::gait::{Durations, GaitCalibration, GaitError, Pressures};
use crate::sensing::NoseGeometry;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Calibration {
    pub gait: GaitCalibration,
    pub nose: NoseGeometry,
    pub controller: ControllerConfig,
}

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("calibration JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Gait(#[from] GaitError),
    #[error("invalid calibration: {0}")]
    Invalid(&'static str),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CalibrationPatch {
    extension_gain: Option<f64>,
    anchor_slip: Option<f64>,
    bend_gain: Option<f64>,
    turn_inverted: Option<bool>,
    max_pressure: Option<f64>,
    pressures: Option<PressuresPatch>,
    durations: Option<DurationsPatch>,
    nose: Option<NosePatch>,
    light_deadband: Option<u16>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PressuresPatch {
    back: Option<f64>,
    center: Option<f64>,
    front: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DurationsPatch {
    radial: Option<f64>,
    center: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NosePatch {
    radius: Option<f64>,
    sensor_offset_angle: Option<f64>,
    sensor_radius: Option<f64>,
    gain: Option<f64>,
    noise_std: Option<f64>,
}

impl Calibration {
    /// Parse a JSON override fragment and merge it over the defaults.
    pub fn from_json(text: &str) -> Result<Calibration, CalibrationError> {
        let patch: CalibrationPatch = serde_json::from_str(text)?;
        let mut calib = Calibration::default();

        let g = &mut calib.gait;
        let Pressures { back, center, front } = g.pressures;
        let Durations { radial, center: center_dur } = g.durations;
        g.extension_gain = patch.extension_gain.unwrap_or(g.extension_gain);
        g.anchor_slip = patch.anchor_slip.unwrap_or(g.anchor_slip);
        g.bend_gain = patch.bend_gain.unwrap_or(g.bend_gain);
        g.turn_inverted = patch.turn_inverted.unwrap_or(g.turn_inverted);
        g.max_pressure = patch.max_pressure.unwrap_or(g.max_pressure);
        if let Some(p) = patch.pressures {
            g.pressures = Pressures {
                back: p.back.unwrap_or(back),
                center: p.center.unwrap_or(center),
                front: p.front.unwrap_or(front),
            };
        }
        if let Some(d) = patch.durations {
            g.durations = Durations {
                radial: d.radial.unwrap_or(radial),
                center: d.center.unwrap_or(center_dur),
            };
        }
        if let Some(n) = patch.nose {
            let base = calib.nose;
            calib.nose = NoseGeometry {
                radius: n.radius.unwrap_or(base.radius),
                sensor_offset_angle: n.sensor_offset_angle.unwrap_or(base.sensor_offset_angle),
                sensor_radius: n.sensor_radius.unwrap_or(base.sensor_radius),
                gain: n.gain.unwrap_or(base.gain),
                noise_std: n.noise_std.unwrap_or(base.noise_std),
            };
        }
        if let Some(d) = patch.light_deadband {
            calib.controller.light_deadband = d;
        }
        calib.validate()?;
        Ok(calib)
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        self.gait.validate()?;
        let n = &self.nose;
        if !(n.radius.is_finite() && n.radius > 0.0) {
            return Err(CalibrationError::Invalid("nose.radius must be > 0"));
        }
        if !(n.sensor_offset_angle > 0.0 && n.sensor_offset_angle < std::f64::consts::FRAC_PI_2) {
            return Err(CalibrationError::Invalid(
                "nose.sensor_offset_angle must be in (0, pi/2)",
            ));
        }
        if !(n.sensor_radius.is_finite() && n.sensor_radius > 0.0) {
            return Err(CalibrationError::Invalid("nose.sensor_radius must be > 0"));
        }
        if !(n.gain.is_finite() && n.gain > 0.0) {
            return Err(CalibrationError::Invalid("nose.gain must be > 0"));
        }
        if !(n.noise_std.is_finite() && n.noise_std >= 0.0) {
            return Err(CalibrationError::Invalid("nose.noise_std must be >= 0"));
        }
        Ok(())
    }
}
