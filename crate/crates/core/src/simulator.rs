//! The closed loop: sense → transmit → decide → actuate → resolve collisions
//! → record, at gait-cycle granularity, with outcome classification.
//!
//! One control iteration is one full command plan (up to two directional
//! cycles plus a forward cycle). A run is strictly single-threaded and fully
//! determined by (scenario, calibration, channel config, seed); parallelism
//! belongs to the batch layer, which never shares mutable state between runs.

use crate::calibration::Calibration;
use crate::controller::{decide, step_plan, CommandPlan, ControllerState};
use crate::gait::{apply_cycle, build_cycle, CycleKind};
use crate::geometry::{wall_penetration, Pose, Vec2, WallSide};
use crate::rng::{SimRng, CHANNEL_STREAM_TAG, NOISE_STREAM_TAG};
use crate::scenario::{Scenario, ScenarioError};
use crate::sensing::{detect_contact, read_photodiodes_noisy, ContactFlags, LightPair, NoseGeometry};
use crate::telemetry::{channel_step, ChannelConfig, LatestFrame, SensorPacket};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Harness limits and the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub max_iterations: u32,
    /// Window length for wedge detection, iterations.
    pub stuck_window: u32,
    /// Minimum nose movement over the window to count as alive, mm.
    pub stuck_epsilon: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_iterations: 500,
            stuck_window: 50,
            stuck_epsilon: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Reached,
    Diverged,
    Stuck,
    Timeout,
}

/// One row of the trajectory: the state after a full control iteration, plus
/// what the controller sensed at its start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub iteration: u32,
    /// First cycle of the iteration's plan (the steering decision);
    /// `None` on the initial row.
    pub cycle_kind: Option<CycleKind>,
    pub pose: Pose,
    pub contact: ContactFlags,
    pub light: LightPair,
    pub distance_to_target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgressStats {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub iterations_used: u32,
    pub trajectory: Vec<TrajectorySample>,
    /// Per-iteration approach toward the light; `None` for zero-iteration runs.
    pub progress_per_iteration: Option<ProgressStats>,
    /// Every gait cycle executed, in order.
    pub cycle_log: Vec<CycleKind>,
    /// Iterations on which collision resolution failed to converge.
    pub wedged_iterations: Vec<u32>,
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("invalid sim config: {0}")]
    BadConfig(&'static str),
    #[error("trajectory too short for progress stats ({0} samples, need at least 2)")]
    TrajectoryTooShort(usize),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.max_iterations == 0 {
            return Err(SimError::BadConfig("max_iterations must be positive"));
        }
        if self.stuck_window == 0 {
            return Err(SimError::BadConfig("stuck_window must be positive"));
        }
        if !(self.stuck_epsilon.is_finite() && self.stuck_epsilon > 0.0) {
            return Err(SimError::BadConfig("stuck_epsilon must be positive"));
        }
        Ok(())
    }
}

const MAX_RESOLVE_PASSES: usize = 16;

/// Penetrations below this are treated as resolved; an order of magnitude
/// under the 1e-6 mm non-penetration budget, so tangential slides terminate
/// instead of chasing the last ulp.
const RESOLVE_EPS_MM: f64 = 1e-7;

/// Outcome of positional collision resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionResolution {
    pub pose: Pose,
    /// True when no penetration-free pose was found within the pass budget.
    pub wedged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Constraint {
    Peg(usize),
    Wall(WallSide),
}

fn violated_constraints(p: Vec2, geom: &NoseGeometry, scenario: &Scenario) -> Vec<Constraint> {
    let mut out = Vec::new();
    for (i, peg) in scenario.pegs.iter().enumerate() {
        if p.distance(peg.center) < geom.radius + peg.radius - RESOLVE_EPS_MM {
            out.push(Constraint::Peg(i));
        }
    }
    for side in WallSide::ALL {
        if wall_penetration(p, geom.radius, &scenario.arena, side) > RESOLVE_EPS_MM {
            out.push(Constraint::Wall(side));
        }
    }
    out
}

/// Minimal translation along the penetration normal to exact contact.
fn project_single(p: Vec2, c: Constraint, geom: &NoseGeometry, scenario: &Scenario) -> Vec2 {
    match c {
        Constraint::Peg(i) => {
            let peg = &scenario.pegs[i];
            let contact_dist = geom.radius + peg.radius;
            peg.center.add(p.sub(peg.center).normalized().scale(contact_dist))
        }
        Constraint::Wall(side) => match side {
            WallSide::Left => Vec2::new(geom.radius, p.y),
            WallSide::Right => Vec2::new(scenario.arena.width - geom.radius, p.y),
            WallSide::Bottom => Vec2::new(p.x, geom.radius),
            WallSide::Top => Vec2::new(p.x, scenario.arena.height - geom.radius),
        },
    }
}

/// Point where a wall's clamp line meets a wall's fixed coordinate:
/// (axis, value) with axis 0 = x, 1 = y.
fn wall_line(side: WallSide, geom: &NoseGeometry, scenario: &Scenario) -> (usize, f64) {
    match side {
        WallSide::Left => (0, geom.radius),
        WallSide::Right => (0, scenario.arena.width - geom.radius),
        WallSide::Bottom => (1, geom.radius),
        WallSide::Top => (1, scenario.arena.height - geom.radius),
    }
}

/// Pose satisfying two constraints simultaneously at exact contact, nearest
/// to `near`; `None` when no such point exists (genuinely wedged geometry).
fn corner_solve(
    a: Constraint,
    b: Constraint,
    near: Vec2,
    geom: &NoseGeometry,
    scenario: &Scenario,
) -> Option<Vec2> {
    let pick = |p1: Vec2, p2: Vec2| {
        if near.distance(p1) <= near.distance(p2) {
            p1
        } else {
            p2
        }
    };
    match (a, b) {
        (Constraint::Wall(wa), Constraint::Wall(wb)) => {
            let (axis_a, val_a) = wall_line(wa, geom, scenario);
            let (axis_b, val_b) = wall_line(wb, geom, scenario);
            if axis_a == axis_b {
                return None; // opposite walls: corridor narrower than the nose
            }
            Some(if axis_a == 0 {
                Vec2::new(val_a, val_b)
            } else {
                Vec2::new(val_b, val_a)
            })
        }
        (Constraint::Peg(i), Constraint::Wall(w)) | (Constraint::Wall(w), Constraint::Peg(i)) => {
            let peg = &scenario.pegs[i];
            let contact = geom.radius + peg.radius;
            let (axis, val) = wall_line(w, geom, scenario);
            let (fixed_delta, center_other) = if axis == 0 {
                (val - peg.center.x, peg.center.y)
            } else {
                (val - peg.center.y, peg.center.x)
            };
            let disc = contact * contact - fixed_delta * fixed_delta;
            if disc < 0.0 {
                return None;
            }
            let h = disc.sqrt();
            let (p1, p2) = if axis == 0 {
                (Vec2::new(val, center_other + h), Vec2::new(val, center_other - h))
            } else {
                (Vec2::new(center_other + h, val), Vec2::new(center_other - h, val))
            };
            Some(pick(p1, p2))
        }
        (Constraint::Peg(i), Constraint::Peg(j)) => {
            let (pa, pb) = (&scenario.pegs[i], &scenario.pegs[j]);
            let (ra, rb) = (geom.radius + pa.radius, geom.radius + pb.radius);
            let d = pa.center.distance(pb.center);
            if d == 0.0 || d > ra + rb || d < (ra - rb).abs() {
                return None;
            }
            let along = (ra * ra - rb * rb + d * d) / (2.0 * d);
            let disc = ra * ra - along * along;
            if disc < 0.0 {
                return None;
            }
            let h = disc.sqrt();
            let axis = pb.center.sub(pa.center).scale(1.0 / d);
            let base = pa.center.add(axis.scale(along));
            let perp = Vec2::new(-axis.y, axis.x);
            Some(pick(base.add(perp.scale(h)), base.sub(perp.scale(h))))
        }
    }
}

/// Push the nose disk out of every peg and wall it penetrates, translating
/// minimally along the penetration normal to exact contact distance; when two
/// constraints conflict, project onto their common contact point instead.
/// Heading never changes. Iterates to a fixed point, at most 16 passes.
pub fn resolve_collisions(
    pose: Pose,
    geom: &NoseGeometry,
    scenario: &Scenario,
) -> CollisionResolution {
    let mut p = pose.position;
    for _ in 0..MAX_RESOLVE_PASSES {
        let violated = violated_constraints(p, geom, scenario);
        match violated[..] {
            [] => break,
            [c] => p = project_single(p, c, geom, scenario),
            [a, b] => match corner_solve(a, b, p, geom, scenario) {
                Some(corner) => p = corner,
                None => {
                    p = project_single(p, a, geom, scenario);
                    p = project_single(p, b, geom, scenario);
                }
            },
            _ => {
                for c in violated {
                    p = project_single(p, c, geom, scenario);
                }
            }
        }
    }
    let wedged = !violated_constraints(p, geom, scenario).is_empty();
    CollisionResolution {
        pose: Pose { position: p, heading: pose.heading },
        wedged,
    }
}

/// Mean and sample standard deviation of per-iteration progress
/// (distance-to-target decrease between consecutive samples).
pub fn progress_stats(trajectory: &[TrajectorySample]) -> Result<ProgressStats, SimError> {
    if trajectory.len() < 2 {
        return Err(SimError::TrajectoryTooShort(trajectory.len()));
    }
    let deltas: Vec<f64> = trajectory
        .windows(2)
        .map(|w| w[0].distance_to_target - w[1].distance_to_target)
        .collect();
    let n = deltas.len() as f64;
    let mean = deltas.iter().sum::<f64>() / n;
    let std = if deltas.len() < 2 {
        0.0
    } else {
        (deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Ok(ProgressStats { mean, std })
}

/// Execute one full run. Deterministic in (scenario, calib, channel, seed).
pub fn run(
    scenario: &Scenario,
    calib: &Calibration,
    channel: &ChannelConfig,
    sim: &SimConfig,
) -> Result<RunResult, SimError> {
    scenario.validate()?;
    channel.validate().map_err(|_| SimError::BadConfig("channel"))?;
    sim.validate()?;

    let mut channel_rng = SimRng::seed_from_u64(sim.seed ^ CHANNEL_STREAM_TAG);
    let mut noise_rng = SimRng::seed_from_u64(sim.seed ^ NOISE_STREAM_TAG);

    let mut pose = scenario.start;
    let mut link = LatestFrame::default();
    let mut controller = ControllerState::default();
    let mut last_plan: Option<CommandPlan> = None;
    let mut seq: u8 = 0;

    let mut trajectory = Vec::new();
    let mut cycle_log = Vec::new();
    let mut wedged_iterations = Vec::new();

    let distance = |p: Pose| p.position.distance(scenario.light.position);

    trajectory.push(TrajectorySample {
        iteration: 0,
        cycle_kind: None,
        pose,
        contact: detect_contact(pose, &calib.nose, scenario),
        light: read_photodiodes_noisy(pose, &calib.nose, &scenario.light, &mut noise_rng),
        distance_to_target: distance(pose),
    });

    let mut outcome = Outcome::Timeout;
    let mut iterations_used = 0;

    if distance(pose) <= scenario.reach_radius {
        outcome = Outcome::Reached;
    } else {
        for iteration in 1..=sim.max_iterations {
            // sense at the current pose and push the frame through the link
            let contact = detect_contact(pose, &calib.nose, scenario);
            let light =
                read_photodiodes_noisy(pose, &calib.nose, &scenario.light, &mut noise_rng);
            let packet = SensorPacket { seq, contact, light };
            seq = seq.wrapping_add(1);
            let delivered = channel_step(&packet, channel, &mut channel_rng);
            if let Some(d) = delivered {
                link.push(d);
            }

            // decide on the freshest delivered frame; on a gap, repeat the
            // previous plan (forward if nothing ever arrived)
            let plan = if delivered.is_some() {
                let latest = link.latest().expect("frame just pushed");
                let (next, plan) = decide(&controller, &latest, &calib.controller);
                controller = next;
                plan
            } else {
                let plan = last_plan
                    .clone()
                    .unwrap_or(CommandPlan { cycles: vec![CycleKind::Forward] });
                controller.plan_queue = plan.cycles.iter().copied().collect();
                plan
            };
            last_plan = Some(plan.clone());

            // execute the whole plan, resolving collisions after each cycle
            let mut wedged = false;
            while let Some(kind) = step_plan(&mut controller) {
                let cycle = build_cycle(kind, &calib.gait);
                pose = apply_cycle(pose, &cycle, &calib.gait).new_pose;
                let resolution = resolve_collisions(pose, &calib.nose, scenario);
                pose = resolution.pose;
                wedged |= resolution.wedged;
                cycle_log.push(kind);
            }
            if wedged {
                wedged_iterations.push(iteration);
            }

            trajectory.push(TrajectorySample {
                iteration,
                cycle_kind: Some(plan.cycles[0]),
                pose,
                contact,
                light,
                distance_to_target: distance(pose),
            });
            iterations_used = iteration;

            if distance(pose) <= scenario.reach_radius {
                outcome = Outcome::Reached;
                break;
            }
            if iteration >= sim.stuck_window {
                let back = &trajectory[(iteration - sim.stuck_window) as usize];
                if pose.position.distance(back.pose.position) < sim.stuck_epsilon {
                    outcome = Outcome::Stuck;
                    break;
                }
            }
        }
    }

    if outcome == Outcome::Timeout
        && trajectory.last().unwrap().distance_to_target > trajectory[0].distance_to_target
    {
        outcome = Outcome::Diverged;
    }

    let progress_per_iteration = progress_stats(&trajectory).ok();
    Ok(RunResult {
        outcome,
        iterations_used,
        trajectory,
        progress_per_iteration,
        cycle_log,
        wedged_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::scenario::Peg;

    fn empty_arena_dead_ahead() -> Scenario {
        Scenario::default_template() // light 1100 mm dead ahead of start
    }

    #[test]
    fn straight_line_run_reaches_in_100_iterations() {
        let scenario = empty_arena_dead_ahead();
        let result = run(
            &scenario,
            &Calibration::default(),
            &ChannelConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(result.outcome, Outcome::Reached);
        assert_eq!(result.iterations_used, 100);
        assert!(result.cycle_log.iter().all(|c| *c == CycleKind::Forward));
        let stats = result.progress_per_iteration.unwrap();
        assert!((stats.mean - 10.0).abs() < 1e-9, "mean {}", stats.mean);
        assert!(stats.std.abs() < 1e-9);
        // heading never wavers on the symmetry axis
        assert!(result.trajectory.iter().all(|s| s.pose.heading == 0.0));
    }

    #[test]
    fn start_within_reach_radius_is_zero_iterations() {
        let mut scenario = empty_arena_dead_ahead();
        scenario.start = Pose::new(1250.0, 455.0, 0.0);
        let result = run(
            &scenario,
            &Calibration::default(),
            &ChannelConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(result.outcome, Outcome::Reached);
        assert_eq!(result.iterations_used, 0);
        assert_eq!(result.trajectory.len(), 1);
        assert!(result.progress_per_iteration.is_none());
    }

    #[test]
    fn runs_are_deterministic() {
        let mut scenario = empty_arena_dead_ahead();
        scenario.pegs.push(Peg { center: Vec2::new(700.0, 430.0), radius: 37.5 });
        let channel = ChannelConfig { drop_probability: 0.3, ..ChannelConfig::default() };
        let sim = SimConfig { seed: 99, ..SimConfig::default() };
        let a = run(&scenario, &Calibration::default(), &channel, &sim).unwrap();
        let b = run(&scenario, &Calibration::default(), &channel, &sim).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn full_drop_still_moves_forward() {
        let scenario = empty_arena_dead_ahead();
        let channel = ChannelConfig { drop_probability: 1.0, ..ChannelConfig::default() };
        let result = run(
            &scenario,
            &Calibration::default(),
            &channel,
            &SimConfig::default(),
        )
        .unwrap();
        // no packet ever arrives: safe default is forward motion
        assert_eq!(result.outcome, Outcome::Reached);
        assert!(result.cycle_log.iter().all(|c| *c == CycleKind::Forward));
    }

    #[test]
    fn blocked_robot_is_eventually_not_stuck_or_reaches() {
        // peg field straight ahead; the avoidance policy must keep it moving
        let mut scenario = empty_arena_dead_ahead();
        scenario.pegs.push(Peg { center: Vec2::new(700.0, 455.0), radius: 37.5 });
        let result = run(
            &scenario,
            &Calibration::default(),
            &ChannelConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(result.outcome, Outcome::Reached, "outcome {:?}", result.outcome);
    }

    #[test]
    fn progress_stats_basic() {
        let mk = |i: u32, d: f64| TrajectorySample {
            iteration: i,
            cycle_kind: None,
            pose: Pose::new(0.0, 0.0, 0.0),
            contact: ContactFlags::default(),
            light: LightPair { left: 0, right: 0 },
            distance_to_target: d,
        };
        let stats = progress_stats(&[mk(0, 110.0), mk(1, 100.0), mk(2, 90.0)]).unwrap();
        assert_eq!(stats.mean, 10.0);
        assert_eq!(stats.std, 0.0);
        assert!(matches!(
            progress_stats(&[mk(0, 1.0)]),
            Err(SimError::TrajectoryTooShort(1))
        ));
    }

    #[test]
    fn resolve_pushes_out_of_peg() {
        let mut scenario = empty_arena_dead_ahead();
        scenario.pegs.push(Peg { center: Vec2::new(700.0, 455.0), radius: 37.5 });
        let geom = NoseGeometry::default();
        let res = resolve_collisions(Pose::new(650.0, 455.0, 0.0), &geom, &scenario);
        assert!(!res.wedged);
        let d = res.pose.position.distance(Vec2::new(700.0, 455.0));
        assert!((d - 62.5).abs() < 1e-9, "distance {d}");
        // pushed along the center-to-nose ray
        assert_eq!(res.pose.position.y, 455.0);
        assert!(res.pose.position.x < 650.0);
        assert_eq!(res.pose.heading, 0.0);
    }

    #[test]
    fn resolve_leaves_free_pose_unchanged() {
        let scenario = empty_arena_dead_ahead();
        let geom = NoseGeometry::default();
        let pose = Pose::new(400.0, 300.0, 1.0);
        assert_eq!(resolve_collisions(pose, &geom, &scenario).pose, pose);
    }

    #[test]
    fn resolve_satisfies_wall_and_peg_simultaneously() {
        let mut scenario = empty_arena_dead_ahead();
        let peg = Peg { center: Vec2::new(200.0, 60.0), radius: 37.5 };
        scenario.pegs.push(peg);
        let geom = NoseGeometry::default();
        // penetrating both the bottom wall and the peg
        let res = resolve_collisions(Pose::new(190.0, 10.0, 0.5), &geom, &scenario);
        assert!(!res.wedged);
        let peg_gap = res.pose.position.distance(peg.center) - (geom.radius + peg.radius);
        assert!(peg_gap >= -1e-6, "peg gap {peg_gap}");
        assert!(res.pose.position.y >= geom.radius - 1e-6);
    }

    #[test]
    fn narrow_gap_rests_at_double_contact() {
        // two pegs whose gap is narrower than the nose diameter: the nose
        // cannot pass through, it comes to rest touching both
        let mut scenario = empty_arena_dead_ahead();
        let (a, b) = (Vec2::new(700.0, 395.0), Vec2::new(700.0, 515.0));
        scenario.pegs.push(Peg { center: a, radius: 37.5 });
        scenario.pegs.push(Peg { center: b, radius: 37.5 });
        let geom = NoseGeometry::default();
        let res = resolve_collisions(Pose::new(699.0, 455.0, 0.0), &geom, &scenario);
        assert!(!res.wedged);
        assert!((res.pose.position.distance(a) - 62.5).abs() < 1e-9);
        assert!((res.pose.position.distance(b) - 62.5).abs() < 1e-9);
        assert!(res.pose.position.x < 699.0); // pushed back out the near side
    }

    #[test]
    fn impossible_corridor_reports_wedged() {
        // arena narrower than the nose disk: no penetration-free pose exists
        let scenario = Scenario {
            arena: crate::geometry::Arena { width: 500.0, height: 40.0 },
            pegs: vec![],
            light: crate::scenario::LightSource {
                position: Vec2::new(450.0, 20.0),
                power: 1.0e6,
            },
            start: Pose::new(50.0, 20.0, 0.0),
            reach_radius: 10.0,
        };
        let geom = NoseGeometry::default();
        let res = resolve_collisions(Pose::new(250.0, 20.0, 0.0), &geom, &scenario);
        assert!(res.wedged);
    }

    #[test]
    fn iteration_displacement_bounded_by_plan() {
        let mut scenario = empty_arena_dead_ahead();
        scenario.light.position = Vec2::new(1300.0, 700.0);
        let result = run(
            &scenario,
            &Calibration::default(),
            &ChannelConfig::default(),
            &SimConfig::default(),
        )
        .unwrap();
        let bound = 2.0 * 10.0 + 1e-9; // one forward plus two half-stroke cycles
        for w in result.trajectory.windows(2) {
            let step = w[0].pose.position.distance(w[1].pose.position);
            assert!(step <= bound, "step {step}");
        }
    }
}
