//! Static world description: arena, peg field, light source and start pose,
//! plus JSON (de)serialization and seeded random peg placement.
//!
//! Scenario values are immutable once constructed and validated; they are safe
//! to share across concurrent runs.

use crate::geometry::{normalize_angle, Arena, Pose, Vec2};
use crate::rng::SimRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed cylindrical obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peg {
    pub center: Vec2,
    pub radius: f64,
}

/// Point light the robot steers toward. `power` is a unitless source strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightSource {
    pub position: Vec2,
    pub power: f64,
}

/// The world the robot cannot see: everything a run needs besides calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub arena: Arena,
    pub pegs: Vec<Peg>,
    pub light: LightSource,
    pub start: Pose,
    pub reach_radius: f64,
}

/// Default clearance kept between peg surfaces and the start/light positions,
/// and between peg centers during generation.
pub const DEFAULT_KEEP_OUT_MM: f64 = 150.0;
pub const DEFAULT_PEG_SEPARATION_MM: f64 = 150.0;
pub const DEFAULT_PEG_RADIUS_MM: f64 = 37.5;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("arena dimensions must be positive, got {width} x {height}")]
    BadArena { width: f64, height: f64 },
    #[error("light power must be positive, got {0}")]
    BadLightPower(f64),
    #[error("reach_radius must be positive, got {0}")]
    BadReachRadius(f64),
    #[error("field {0} must be finite")]
    NonFinite(&'static str),
    #[error("peg {index} has non-positive radius {radius}")]
    BadPegRadius { index: usize, radius: f64 },
    #[error("peg {index} extends outside the arena")]
    PegOutsideArena { index: usize },
    #[error("pegs {first} and {second} overlap")]
    PegOverlap { first: usize, second: usize },
    #[error("peg {index} violates the start keep-out distance ({clearance:.1} mm < {required:.1} mm)")]
    StartKeepOut {
        index: usize,
        clearance: f64,
        required: f64,
    },
    #[error("peg {index} violates the light keep-out distance ({clearance:.1} mm < {required:.1} mm)")]
    LightKeepOut {
        index: usize,
        clearance: f64,
        required: f64,
    },
    #[error("start position lies outside the arena")]
    StartOutsideArena,
    #[error("light position lies outside the arena")]
    LightOutsideArena,
    #[error("over-dense scenario: failed to place peg {placed} of {requested} after {attempts} rejection attempts")]
    OverDense {
        placed: usize,
        requested: usize,
        attempts: u32,
    },
    #[error("JSON parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Scenario {
    /// Desk-scale template matching the reference test setup: 1520 × 910 mm
    /// arena, start on the left midline facing +x, light on the right midline.
    pub fn default_template() -> Scenario {
        Scenario {
            arena: Arena {
                width: 1520.0,
                height: 910.0,
            },
            pegs: Vec::new(),
            light: LightSource {
                position: Vec2::new(1300.0, 455.0),
                power: 1.0e6,
            },
            start: Pose::new(200.0, 455.0, 0.0),
            reach_radius: 100.0,
        }
    }

    /// Check every invariant; errors name the offending field or peg index.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.validate_with_keep_out(DEFAULT_KEEP_OUT_MM)
    }

    pub fn validate_with_keep_out(&self, keep_out: f64) -> Result<(), ScenarioError> {
        if !(self.arena.width.is_finite() && self.arena.height.is_finite()) {
            return Err(ScenarioError::NonFinite("arena"));
        }
        if self.arena.width <= 0.0 || self.arena.height <= 0.0 {
            return Err(ScenarioError::BadArena {
                width: self.arena.width,
                height: self.arena.height,
            });
        }
        if !self.light.position.is_finite() || !self.light.power.is_finite() {
            return Err(ScenarioError::NonFinite("light"));
        }
        if self.light.power <= 0.0 {
            return Err(ScenarioError::BadLightPower(self.light.power));
        }
        if !self.start.position.is_finite() || !self.start.heading.is_finite() {
            return Err(ScenarioError::NonFinite("start"));
        }
        if !self.reach_radius.is_finite() {
            return Err(ScenarioError::NonFinite("reach_radius"));
        }
        if self.reach_radius <= 0.0 {
            return Err(ScenarioError::BadReachRadius(self.reach_radius));
        }
        if !self.arena.contains_point(self.start.position) {
            return Err(ScenarioError::StartOutsideArena);
        }
        if !self.arena.contains_point(self.light.position) {
            return Err(ScenarioError::LightOutsideArena);
        }
        for (i, peg) in self.pegs.iter().enumerate() {
            if !peg.center.is_finite() || !peg.radius.is_finite() {
                return Err(ScenarioError::NonFinite("pegs"));
            }
            if peg.radius <= 0.0 {
                return Err(ScenarioError::BadPegRadius {
                    index: i,
                    radius: peg.radius,
                });
            }
            if !self.arena.contains_disk(peg.center, peg.radius) {
                return Err(ScenarioError::PegOutsideArena { index: i });
            }
            let start_clearance = self.start.position.distance(peg.center) - peg.radius;
            if start_clearance < keep_out {
                return Err(ScenarioError::StartKeepOut {
                    index: i,
                    clearance: start_clearance,
                    required: keep_out,
                });
            }
            let light_clearance = self.light.position.distance(peg.center) - peg.radius;
            if light_clearance < keep_out {
                return Err(ScenarioError::LightKeepOut {
                    index: i,
                    clearance: light_clearance,
                    required: keep_out,
                });
            }
        }
        for i in 0..self.pegs.len() {
            for j in (i + 1)..self.pegs.len() {
                let d = self.pegs[i].center.distance(self.pegs[j].center);
                if d < self.pegs[i].radius + self.pegs[j].radius {
                    return Err(ScenarioError::PegOverlap { first: i, second: j });
                }
            }
        }
        Ok(())
    }
}

/// Knobs for random peg placement. Defaults reproduce the reference layout
/// density; none of these are hard constants.
#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    pub peg_radius: f64,
    /// Minimum distance between peg centers.
    pub min_separation: f64,
    /// Minimum clearance between peg surfaces and the start/light positions.
    pub keep_out: f64,
    /// Total rejection-sampling budget before giving up.
    pub max_attempts: u32,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            peg_radius: DEFAULT_PEG_RADIUS_MM,
            min_separation: DEFAULT_PEG_SEPARATION_MM,
            keep_out: DEFAULT_KEEP_OUT_MM,
            max_attempts: 10_000,
        }
    }
}

/// Rejection-sample `peg_count` pegs into a copy of `template`.
///
/// The same seed always yields the same scenario, bit for bit; sampling uses
/// only arithmetic and comparisons so the result is platform independent.
pub fn generate_scenario(
    seed: u64,
    peg_count: usize,
    template: &Scenario,
) -> Result<Scenario, ScenarioError> {
    generate_scenario_with(seed, peg_count, template, &GenParams::default())
}

pub fn generate_scenario_with(
    seed: u64,
    peg_count: usize,
    template: &Scenario,
    params: &GenParams,
) -> Result<Scenario, ScenarioError> {
    let mut scenario = template.clone();
    scenario.pegs.clear();
    if peg_count == 0 {
        return Ok(scenario);
    }

    let r = params.peg_radius;
    let (lo_x, hi_x) = (r, scenario.arena.width - r);
    let (lo_y, hi_y) = (r, scenario.arena.height - r);
    if lo_x >= hi_x || lo_y >= hi_y {
        return Err(ScenarioError::OverDense {
            placed: 0,
            requested: peg_count,
            attempts: 0,
        });
    }

    let mut rng = SimRng::seed_from_u64(seed);
    let mut attempts = 0u32;
    while scenario.pegs.len() < peg_count {
        if attempts >= params.max_attempts {
            return Err(ScenarioError::OverDense {
                placed: scenario.pegs.len(),
                requested: peg_count,
                attempts,
            });
        }
        attempts += 1;
        let center = Vec2::new(rng.random_range(lo_x..hi_x), rng.random_range(lo_y..hi_y));
        let start_ok = scenario.start.position.distance(center) - r >= params.keep_out;
        let light_ok = scenario.light.position.distance(center) - r >= params.keep_out;
        let spaced = scenario
            .pegs
            .iter()
            .all(|p| p.center.distance(center) >= params.min_separation);
        if start_ok && light_ok && spaced {
            scenario.pegs.push(Peg { center, radius: r });
        }
    }
    debug_assert!(scenario.validate_with_keep_out(params.keep_out).is_ok());
    Ok(scenario)
}

// ---------------------------------------------------------------------------
// JSON schema (lengths in mm, angles in degrees at this boundary only)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    arena: ArenaFile,
    light: LightFile,
    start: StartFile,
    reach_radius: f64,
    pegs: Vec<PegFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArenaFile {
    width: f64,
    height: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LightFile {
    x: f64,
    y: f64,
    power: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartFile {
    x: f64,
    y: f64,
    theta_deg: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PegFile {
    x: f64,
    y: f64,
    r: f64,
}

/// Parse and validate a scenario from its JSON text form.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let scenario = Scenario {
        arena: Arena {
            width: file.arena.width,
            height: file.arena.height,
        },
        pegs: file
            .pegs
            .iter()
            .map(|p| Peg {
                center: Vec2::new(p.x, p.y),
                radius: p.r,
            })
            .collect(),
        light: LightSource {
            position: Vec2::new(file.light.x, file.light.y),
            power: file.light.power,
        },
        start: Pose::new(
            file.start.x,
            file.start.y,
            normalize_angle(file.start.theta_deg.to_radians()),
        ),
        reach_radius: file.reach_radius,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Serialize a scenario to its canonical JSON text form (deterministic bytes).
pub fn save_scenario(s: &Scenario) -> String {
    let file = ScenarioFile {
        arena: ArenaFile {
            width: s.arena.width,
            height: s.arena.height,
        },
        light: LightFile {
            x: s.light.position.x,
            y: s.light.position.y,
            power: s.light.power,
        },
        start: StartFile {
            x: s.start.position.x,
            y: s.start.position.y,
            theta_deg: s.start.heading.to_degrees(),
        },
        reach_radius: s.reach_radius,
        pegs: s
            .pegs
            .iter()
            .map(|p| PegFile {
                x: p.center.x,
                y: p.center.y,
                r: p.radius,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario serialization");
    text.push('\n');
    text
}

/// serde_json reports 1-based line/column; convert back to a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len() + 1;
    }
    text.len()
}
