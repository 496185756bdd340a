//! Trajectory CSV interface, byte-stable.
//!
//! Columns, in order:
//! `iteration,cycle_kind,x_mm,y_mm,theta_rad,contact_left,contact_right,light_left,light_right,dist_to_target_mm`
//! Floats carry 6 significant digits; contacts are 0/1; the initial row uses
//! cycle_kind `start`.

use crate::gait::CycleKind;
use crate::geometry::Pose;
use crate::sensing::{ContactFlags, LightPair};
use crate::simulator::TrajectorySample;
use thiserror::Error;

pub const CSV_HEADER: &str = "iteration,cycle_kind,x_mm,y_mm,theta_rad,contact_left,contact_right,light_left,light_right,dist_to_target_mm";

#[derive(Debug, Error, PartialEq)]
pub enum CsvError {
    #[error("line 1: expected trajectory header, got {0:?}")]
    BadHeader(String),
    #[error("line {line}: {message}")]
    BadRecord { line: usize, message: String },
}

/// Render a value with 6 significant digits, trailing zeros trimmed.
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (5 - exponent).clamp(0, 17) as usize;
    let mut s = format!("{value:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn kind_token(kind: Option<CycleKind>) -> &'static str {
    match kind {
        None => "start",
        Some(CycleKind::Forward) => "forward",
        Some(CycleKind::DirectionalLeft) => "left",
        Some(CycleKind::DirectionalRight) => "right",
    }
}

fn parse_kind(token: &str) -> Option<Option<CycleKind>> {
    match token {
        "start" => Some(None),
        "forward" => Some(Some(CycleKind::Forward)),
        "left" => Some(Some(CycleKind::DirectionalLeft)),
        "right" => Some(Some(CycleKind::DirectionalRight)),
        _ => None,
    }
}

/// Serialize a trajectory to CSV text (header row included).
pub fn write_csv(trajectory: &[TrajectorySample]) -> String {
    let mut out = String::with_capacity(64 * (trajectory.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in trajectory {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            s.iteration,
            kind_token(s.cycle_kind),
            format_sig6(s.pose.position.x),
            format_sig6(s.pose.position.y),
            format_sig6(s.pose.heading),
            s.contact.left as u8,
            s.contact.right as u8,
            s.light.left,
            s.light.right,
            format_sig6(s.distance_to_target),
        ));
    }
    out
}

/// Parse trajectory CSV text back into samples, validating the schema.
pub fn read_csv(text: &str) -> Result<Vec<TrajectorySample>, CsvError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER {
        return Err(CsvError::BadHeader(header.to_string()));
    }
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 2;
        let record = |message: String| CsvError::BadRecord { line: line_no, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(record(format!("expected 10 fields, got {}", fields.len())));
        }
        let uint = |s: &str| s.parse::<u32>().map_err(|e| record(format!("{e}: {s:?}")));
        let float = |s: &str| s.parse::<f64>().map_err(|e| record(format!("{e}: {s:?}")));
        let flag = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(record(format!("expected 0/1 flag, got {s:?}"))),
        };
        let kind = parse_kind(fields[1])
            .ok_or_else(|| record(format!("unknown cycle_kind {:?}", fields[1])))?;
        samples.push(TrajectorySample {
            iteration: uint(fields[0])?,
            cycle_kind: kind,
            pose: Pose::new(float(fields[2])?, float(fields[3])?, float(fields[4])?),
            contact: ContactFlags {
                left: flag(fields[5])?,
                right: flag(fields[6])?,
            },
            light: LightPair {
                left: uint(fields[7])? as u16,
                right: uint(fields[8])? as u16,
            },
            distance_to_target: float(fields[9])?,
        });
    }
    Ok(samples)
}
