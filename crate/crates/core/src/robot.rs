//! Holonomic kinematics under velocity limits.

use std::fmt;
use std::str::FromStr;

use crate::fuzzy::Command;
use crate::geom::{wrap_angle, Vec2};
use crate::render::Pose;
use crate::world::{disc_contact, Contact, WorldScene};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    pub v_min: f64,
    pub v_max: f64,
    pub v_side_max: f64,
    /// rad/s, used only in realign mode.
    pub heading_slew_max: f64,
    pub body_radius: f64,
}

impl Default for Constraints {
    fn default() -> Self {
        Self {
            v_min: 0.1,
            v_max: 1.0,
            v_side_max: 0.5,
            heading_slew_max: 1.0,
            body_radius: 0.2,
        }
    }
}

impl Constraints {
    pub fn validate(&self) -> Result<()> {
        if !(self.v_min >= 0.0 && self.v_min < self.v_max) {
            return Err(Error::invalid("robot", "need 0 <= v_min < v_max"));
        }
        if !(self.v_side_max > 0.0) {
            return Err(Error::invalid("robot", "v_side_max must be positive"));
        }
        if !(self.heading_slew_max >= 0.0) {
            return Err(Error::invalid("robot", "heading_slew_max must be >= 0"));
        }
        if !(self.body_radius > 0.0) {
            return Err(Error::invalid("robot", "body_radius must be positive"));
        }
        Ok(())
    }
}

/// How lateral commands move the body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Locomotion {
    /// Sideways translation, heading fixed.
    #[default]
    Crab,
    /// Translate, then slew the heading toward the velocity direction.
    Realign,
}

impl Locomotion {
    pub fn as_str(self) -> &'static str {
        match self {
            Locomotion::Crab => "crab",
            Locomotion::Realign => "realign",
        }
    }
}

impl fmt::Display for Locomotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Locomotion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "crab" => Ok(Locomotion::Crab),
            "realign" => Ok(Locomotion::Realign),
            other => Err(format!("unknown locomotion mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState {
    pub position: Vec2,
    pub heading: f64,
    pub forward_speed: f64,
    pub lateral_velocity: f64,
}

impl RobotState {
    pub fn at_rest(pose: Pose) -> Self {
        Self {
            position: pose.position,
            heading: pose.heading,
            forward_speed: 0.0,
            lateral_velocity: 0.0,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose {
            position: self.position,
            heading: self.heading,
        }
    }
}

/// Which limits were hit while applying a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClampFlags {
    pub forward: bool,
    pub lateral: bool,
}

impl ClampFlags {
    pub fn any(self) -> bool {
        self.forward || self.lateral
    }
}

pub fn clamp_command(cmd: Command, c: &Constraints) -> (Command, ClampFlags) {
    let fwd = cmd.forward_speed.clamp(c.v_min, c.v_max);
    let lat = cmd.lateral_velocity.clamp(-c.v_side_max, c.v_side_max);
    (
        Command {
            lateral_velocity: lat,
            forward_speed: fwd,
        },
        ClampFlags {
            forward: fwd != cmd.forward_speed,
            lateral: lat != cmd.lateral_velocity,
        },
    )
}

pub fn apply_command(
    state: &RobotState,
    cmd: Command,
    constraints: &Constraints,
    mode: Locomotion,
    dt: f64,
) -> (RobotState, ClampFlags) {
    debug_assert!(dt > 0.0);
    let (cmd, flags) = clamp_command(cmd, constraints);
    let forward = Vec2::from_angle(state.heading);
    let velocity = forward * cmd.forward_speed + forward.right() * cmd.lateral_velocity;
    let position = state.position + velocity * dt;
    let heading = match mode {
        Locomotion::Crab => state.heading,
        Locomotion::Realign => {
            let target = velocity.angle();
            let max_turn = constraints.heading_slew_max * dt;
            let delta = wrap_angle(target - state.heading).clamp(-max_turn, max_turn);
            state.heading + delta
        }
    };
    (
        RobotState {
            position,
            heading,
            forward_speed: cmd.forward_speed,
            lateral_velocity: cmd.lateral_velocity,
        },
        flags,
    )
}

pub fn check_collision(scene: &WorldScene, state: &RobotState, constraints: &Constraints) -> Option<Contact> {
    disc_contact(scene, state.position, constraints.body_radius)
}
