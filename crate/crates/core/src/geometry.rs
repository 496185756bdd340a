//! Planar geometry primitives: vectors, poses, the arena rectangle and the
//! disk/wall contact predicates everything else is built on.
//!
//! Units are millimeters and radians everywhere; degrees exist only at the
//! JSON/CLI boundary.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// 2-D point/vector in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product; sign tells left (+) from right (−).
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        self.sub(other).norm()
    }

    /// Unit vector; zero-length input maps to +x so callers never divide by zero.
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n == 0.0 {
            Vec2::new(1.0, 0.0)
        } else {
            self.scale(1.0 / n)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Unit vector for a heading angle.
pub fn heading_vec(theta: f64) -> Vec2 {
    Vec2::new(theta.cos(), theta.sin())
}

/// Wrap an angle into the canonical interval (-π, π].
/// Already-normalized values pass through bit-identical.
pub fn normalize_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    PI - (PI - theta).rem_euclid(2.0 * PI)
}

/// Robot nose position and heading. Heading stays in (-π, π] after every update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Pose {
            position: Vec2::new(x, y),
            heading: normalize_angle(heading),
        }
    }
}

/// Arena rectangle `[0, width] × [0, height]`, millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arena {
    pub width: f64,
    pub height: f64,
}

impl Arena {
    pub fn contains_point(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    /// True when the whole disk lies inside the rectangle.
    pub fn contains_disk(&self, center: Vec2, radius: f64) -> bool {
        center.x >= radius
            && center.x <= self.width - radius
            && center.y >= radius
            && center.y <= self.height - radius
    }
}

/// One of the four arena walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WallSide {
    Left,
    Right,
    Bottom,
    Top,
}

impl WallSide {
    pub const ALL: [WallSide; 4] = [
        WallSide::Left,
        WallSide::Right,
        WallSide::Bottom,
        WallSide::Top,
    ];
}

/// Strict disk/disk overlap test: true iff the interiors intersect.
/// Exact tangency is not contact.
pub fn disk_contact(a_center: Vec2, a_radius: f64, b_center: Vec2, b_radius: f64) -> bool {
    a_center.distance(b_center) < a_radius + b_radius
}

/// How deep a disk penetrates past a wall's half-plane (positive = penetrating).
pub fn wall_penetration(p: Vec2, radius: f64, arena: &Arena, side: WallSide) -> f64 {
    match side {
        WallSide::Left => radius - p.x,
        WallSide::Right => radius - (arena.width - p.x),
        WallSide::Bottom => radius - p.y,
        WallSide::Top => radius - (arena.height - p.y),
    }
}

/// Wall whose half-plane the disk strictly penetrates, deepest first;
/// ties break in the order left, right, bottom, top.
pub fn wall_contact(p: Vec2, radius: f64, arena: &Arena) -> Option<WallSide> {
    let mut best: Option<(WallSide, f64)> = None;
    for side in WallSide::ALL {
        let depth = wall_penetration(p, radius, arena, side);
        if depth > 0.0 {
            match best {
                Some((_, d)) if d >= depth => {}
                _ => best = Some((side, depth)),
            }
        }
    }
    best.map(|(side, _)| side)
}
