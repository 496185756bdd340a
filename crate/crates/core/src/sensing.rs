//! Nose-cone sensor models: the two phototransistor "eyes" and the left/right
//! contact strips. Pure geometry; the controller only ever compares readings,
//! so the exact falloff law matters little away from ties.

use crate::geometry::{heading_vec, wall_penetration, Pose, Vec2, WallSide};
use crate::scenario::{LightSource, Scenario};
use serde::{Deserialize, Serialize};

/// Near-field clamp for the inverse-square law, mm.
pub const LIGHT_SATURATION_DISTANCE_MM: f64 = 10.0;

/// Touch tolerance: a nose resolved to exact contact distance must still
/// read as touching on the next sample.
pub const CONTACT_EPS_MM: f64 = 1e-9;

/// Nose disk geometry and photosensor placement/response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoseGeometry {
    /// Nose disk radius, mm.
    pub radius: f64,
    /// Angular offset of each eye from the heading axis, radians.
    pub sensor_offset_angle: f64,
    /// Distance of each eye from the nose center, mm.
    pub sensor_radius: f64,
    /// Counts per intensity unit before 16-bit saturation.
    pub gain: f64,
    /// Gaussian read noise in counts; 0 disables noise entirely.
    pub noise_std: f64,
}

impl Default for NoseGeometry {
    fn default() -> Self {
        NoseGeometry {
            radius: 25.0,
            sensor_offset_angle: 0.52,
            sensor_radius: 20.0,
            gain: 100.0,
            noise_std: 0.0,
        }
    }
}

/// Raw 16-bit photosensor pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightPair {
    pub left: u16,
    pub right: u16,
}

/// Which contact strips are touching something.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContactFlags {
    pub left: bool,
    pub right: bool,
}

impl ContactFlags {
    pub fn any(self) -> bool {
        self.left || self.right
    }
}

/// Inverse-square intensity with a near-field clamp.
pub fn light_intensity(light: &LightSource, point: Vec2) -> f64 {
    let d2 = light.position.sub(point).dot(light.position.sub(point));
    light.power / d2.max(LIGHT_SATURATION_DISTANCE_MM * LIGHT_SATURATION_DISTANCE_MM)
}

fn sensor_position(pose: Pose, geom: &NoseGeometry, side_sign: f64) -> Vec2 {
    let angle = pose.heading + side_sign * geom.sensor_offset_angle;
    pose.position.add(heading_vec(angle).scale(geom.sensor_radius))
}

fn raw_reading(pose: Pose, geom: &NoseGeometry, light: &LightSource, side_sign: f64) -> f64 {
    geom.gain * light_intensity(light, sensor_position(pose, geom, side_sign))
}

fn quantize(counts: f64) -> u16 {
    counts.clamp(0.0, 65535.0).round() as u16
}

/// Noise-free eye readings; the left eye sits at heading + offset.
pub fn read_photodiodes(pose: Pose, geom: &NoseGeometry, light: &LightSource) -> LightPair {
    LightPair {
        left: quantize(raw_reading(pose, geom, light, 1.0)),
        right: quantize(raw_reading(pose, geom, light, -1.0)),
    }
}

/// Eye readings with additive Gaussian noise drawn from the run PRNG.
/// With `noise_std == 0` this consumes no randomness and equals
/// [`read_photodiodes`] exactly.
pub fn read_photodiodes_noisy<R: rand::Rng>(
    pose: Pose,
    geom: &NoseGeometry,
    light: &LightSource,
    rng: &mut R,
) -> LightPair {
    if geom.noise_std <= 0.0 {
        return read_photodiodes(pose, geom, light);
    }
    let normal = rand_distr::Normal::new(0.0, geom.noise_std).expect("finite noise std");
    let mut noisy = |side_sign: f64| {
        let n: f64 = rand::Rng::sample(rng, normal);
        quantize(raw_reading(pose, geom, light, side_sign) + n)
    };
    LightPair {
        left: noisy(1.0),
        right: noisy(-1.0),
    }
}

/// Side classification shared by peg and wall contacts: the sign of
/// cross(heading, contact_point − nose) picks left/right; near-zero cross
/// (head-on) raises both flags.
fn classify(flags: &mut ContactFlags, pose: Pose, contact_point: Vec2) {
    let cross = heading_vec(pose.heading).cross(contact_point.sub(pose.position));
    if cross.abs() < 1e-9 {
        flags.left = true;
        flags.right = true;
    } else if cross > 0.0 {
        flags.left = true;
    } else {
        flags.right = true;
    }
}

/// Contact flags for the nose disk against every peg and arena wall.
/// Exact touch counts as contact (within [`CONTACT_EPS_MM`]).
pub fn detect_contact(pose: Pose, geom: &NoseGeometry, scenario: &Scenario) -> ContactFlags {
    let mut flags = ContactFlags::default();
    for peg in &scenario.pegs {
        let to_peg = peg.center.sub(pose.position);
        if to_peg.norm() <= geom.radius + peg.radius + CONTACT_EPS_MM {
            let contact_point = peg.center.sub(to_peg.normalized().scale(peg.radius));
            classify(&mut flags, pose, contact_point);
        }
    }
    for side in WallSide::ALL {
        if wall_penetration(pose.position, geom.radius, &scenario.arena, side) >= -CONTACT_EPS_MM {
            let p = pose.position;
            let contact_point = match side {
                WallSide::Left => Vec2::new(0.0, p.y),
                WallSide::Right => Vec2::new(scenario.arena.width, p.y),
                WallSide::Bottom => Vec2::new(p.x, 0.0),
                WallSide::Top => Vec2::new(p.x, scenario.arena.height),
            };
            classify(&mut flags, pose, contact_point);
        }
    }
    flags
}
