//! Scripted policies for the partner and the opponent.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Action, Role, Vec2, WorldState};

#[derive(Debug, Error, PartialEq)]
pub enum PolicyError {
    #[error("policy parameter `{0}` must be finite and >= 0")]
    BadParameter(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScriptedPolicy {
    Stationary,
    /// Independent Gaussian force per component with standard deviation `sigma` (N).
    RandomForce { sigma: f64 },
    /// Push toward the nearest adversary with magnitude `gain` (N).
    Chase { gain: f64 },
    /// Spring toward the ring center, force `gain * (-pos)`.
    HoldCenter { gain: f64 },
}

impl ScriptedPolicy {
    pub fn validate(&self) -> Result<(), PolicyError> {
        let check = |name, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(PolicyError::BadParameter(name))
            }
        };
        match *self {
            ScriptedPolicy::Stationary => Ok(()),
            ScriptedPolicy::RandomForce { sigma } => check("sigma", sigma),
            ScriptedPolicy::Chase { gain } | ScriptedPolicy::HoldCenter { gain } => check("gain", gain),
        }
    }
}

/// Position of the adversary `role` should chase: teammates chase the
/// Opponent; the Opponent chases the nearer teammate (the Learner on ties).
pub fn chase_target(world: &WorldState, role: Role) -> Vec2 {
    if role.is_teammate() {
        return world.bodies[Role::Opponent].pos;
    }
    let me = world.bodies[role].pos;
    let learner = world.bodies[Role::Learner].pos;
    let partner = world.bodies[Role::Partner].pos;
    if (partner - me).norm() < (learner - me).norm() {
        partner
    } else {
        learner
    }
}

pub fn scripted_action<R: Rng + ?Sized>(
    policy: &ScriptedPolicy,
    world: &WorldState,
    role: Role,
    rng: &mut R,
) -> Action {
    let me = world.bodies[role].pos;
    let force = match *policy {
        ScriptedPolicy::Stationary => Vec2::ZERO,
        ScriptedPolicy::RandomForce { sigma } => {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            Vec2::new(x, y) * sigma
        }
        ScriptedPolicy::Chase { gain } => (chase_target(world, role) - me).normalized_or_zero(1e-12) * gain,
        ScriptedPolicy::HoldCenter { gain } => -me * gain,
    };
    Action { force }.clamped(world.config.max_force)
}
