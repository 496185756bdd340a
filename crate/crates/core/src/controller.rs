//! Decision logic of the pressure-control node.
//!
//! Contact always outranks light. On contact the robot turns twice away from
//! the touching side and pushes forward; with no contact it steers one cycle
//! toward the brighter eye and pushes forward. Every plan ends with exactly
//! one forward cycle, which is what produces the tip oscillation while
//! seeking. There is no map and no memory beyond the side of the last
//! avoidance turn.

use crate::gait::{CycleKind, Side};
use crate::telemetry::SensorPacket;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// What the controller believes it is doing right now.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Seek,
    Avoid { away_side: Side },
}

/// Ordered cycle intents for one control iteration: at most two directional
/// cycles followed by exactly one forward cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandPlan {
    pub cycles: Vec<CycleKind>,
}

impl CommandPlan {
    fn seek(steer: Option<Side>) -> CommandPlan {
        let mut cycles = Vec::with_capacity(2);
        if let Some(side) = steer {
            cycles.push(CycleKind::directional(side));
        }
        cycles.push(CycleKind::Forward);
        CommandPlan { cycles }
    }

    fn avoid(away: Side) -> CommandPlan {
        CommandPlan {
            cycles: vec![
                CycleKind::directional(away),
                CycleKind::directional(away),
                CycleKind::Forward,
            ],
        }
    }
}

/// Tunables of the decision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllerConfig {
    /// Reading difference (counts) treated as a tie. 0 means exact equality.
    pub light_deadband: u16,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig { light_deadband: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllerState {
    pub mode: Mode,
    /// Side of the most recent avoidance turn; seeds the head-on tie-break.
    pub last_avoid_side: Side,
    pub plan_queue: VecDeque<CycleKind>,
}

impl Default for ControllerState {
    fn default() -> Self {
        ControllerState {
            mode: Mode::Seek,
            last_avoid_side: Side::Right,
            plan_queue: VecDeque::new(),
        }
    }
}

/// Map the latest packet to the next plan. Pure: same (state, packet) in,
/// same (state, plan) out. The returned state carries the plan in its queue.
pub fn decide(
    state: &ControllerState,
    packet: &SensorPacket,
    cfg: &ControllerConfig,
) -> (ControllerState, CommandPlan) {
    let contact = packet.contact;
    let (plan, mode, last_avoid_side) = if contact.left && contact.right {
        // head-on: alternate away from the side tried last time
        let away = state.last_avoid_side.opposite();
        (CommandPlan::avoid(away), Mode::Avoid { away_side: away }, away)
    } else if contact.left {
        (CommandPlan::avoid(Side::Right), Mode::Avoid { away_side: Side::Right }, Side::Right)
    } else if contact.right {
        (CommandPlan::avoid(Side::Left), Mode::Avoid { away_side: Side::Left }, Side::Left)
    } else {
        let steer = steer_toward_light(packet, cfg);
        (CommandPlan::seek(steer), Mode::Seek, state.last_avoid_side)
    };
    let new_state = ControllerState {
        mode,
        last_avoid_side,
        plan_queue: plan.cycles.iter().copied().collect(),
    };
    (new_state, plan)
}

fn steer_toward_light(packet: &SensorPacket, cfg: &ControllerConfig) -> Option<Side> {
    let diff = i32::from(packet.light.left) - i32::from(packet.light.right);
    if diff.unsigned_abs() <= u32::from(cfg.light_deadband) {
        None
    } else if diff > 0 {
        Some(Side::Left)
    } else {
        Some(Side::Right)
    }
}

/// Pop the next queued cycle intent, FIFO. Once the queue is empty the caller
/// should feed the freshest packet back through [`decide`].
pub fn step_plan(state: &mut ControllerState) -> Option<CycleKind> {
    state.plan_queue.pop_front()
}
