//! Calibration parameter sweeps: evaluate the net forward-cycle displacement
//! across a range of one scalar, report the table and the argmax.

use crate::error::CliError;
use wormsim::gait::{apply_cycle, build_cycle, CycleKind, GaitCalibration};
use wormsim::geometry::Pose;
use wormsim::trajectory::format_sig6;

/// Scalar calibration fields a sweep can vary.
pub const SWEEP_PARAMS: [&str; 9] = [
    "extension_gain",
    "anchor_slip",
    "bend_gain",
    "max_pressure",
    "back_pressure",
    "center_pressure",
    "front_pressure",
    "radial_duration",
    "center_duration",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl SweepSpec {
    /// Parse the `LO:HI:STEP` range syntax.
    pub fn parse(param: &str, range: &str) -> Result<SweepSpec, CliError> {
        if !SWEEP_PARAMS.contains(&param) {
            return Err(CliError::Domain(format!(
                "unknown sweep parameter {param:?}; expected one of {SWEEP_PARAMS:?}"
            )));
        }
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(CliError::Domain(format!(
                "range {range:?} is not LO:HI:STEP"
            )));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| CliError::Domain(format!("range component {s:?}: {e}")))
        };
        let spec = SweepSpec {
            param: param.to_string(),
            lo: parse(lo)?,
            hi: parse(hi)?,
            step: parse(step)?,
        };
        if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.step.is_finite()) {
            return Err(CliError::Domain("range components must be finite".into()));
        }
        if spec.lo >= spec.hi {
            return Err(CliError::Domain(format!(
                "range lo {} must be below hi {}",
                spec.lo, spec.hi
            )));
        }
        if spec.step <= 0.0 {
            return Err(CliError::Domain(format!(
                "range step {} must be positive",
                spec.step
            )));
        }
        Ok(spec)
    }

    /// Sampled values, endpoints inclusive.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = self.lo + k as f64 * self.step;
            if v > self.hi + self.step * 1e-9 {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }
}

fn with_param(param: &str, value: f64) -> GaitCalibration {
    let mut calib = GaitCalibration::default();
    match param {
        "extension_gain" => calib.extension_gain = value,
        "anchor_slip" => calib.anchor_slip = value,
        "bend_gain" => calib.bend_gain = value,
        "max_pressure" => calib.max_pressure = value,
        "back_pressure" => calib.pressures.back = value,
        "center_pressure" => calib.pressures.center = value,
        "front_pressure" => calib.pressures.front = value,
        "radial_duration" => calib.durations.radial = value,
        "center_duration" => calib.durations.center = value,
        other => unreachable!("param {other} validated at parse time"),
    }
    calib
}

/// Net displacement of one forward cycle under the modified calibration:
/// a direct cycle evaluation, no caching anywhere.
pub fn forward_displacement(param: &str, value: f64) -> Result<f64, CliError> {
    let calib = with_param(param, value);
    calib
        .validate()
        .map_err(|e| CliError::Domain(format!("{param} = {value}: {e}")))?;
    let cycle = build_cycle(CycleKind::Forward, &calib);
    Ok(apply_cycle(Pose::new(0.0, 0.0, 0.0), &cycle, &calib).net_displacement)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<(f64, f64)>,
    pub argmax_value: f64,
    pub argmax_objective: f64,
}

/// Evaluate the sweep; first maximal objective wins ties.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, CliError> {
    let mut rows = Vec::new();
    for value in spec.values() {
        rows.push((value, forward_displacement(&spec.param, value)?));
    }
    let (argmax_value, argmax_objective) = rows
        .iter()
        .copied()
        .fold(None::<(f64, f64)>, |best, (v, obj)| match best {
            Some((_, best_obj)) if best_obj >= obj => best,
            _ => Some((v, obj)),
        })
        .expect("non-empty range");
    Ok(SweepResult {
        rows,
        argmax_value,
        argmax_objective,
    })
}

/// Render the sweep table as CSV.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from("value,objective\n");
    for (value, objective) in &result.rows {
        out.push_str(&format!("{},{}\n", format_sig6(*value), format_sig6(*objective)));
    }
    out
}
