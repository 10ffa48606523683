//! Planar three-disc sumo ring.
//!
//! Three rigid discs (Learner, Partner, Opponent) move under clamped forces
//! inside a circular ring. The team (Learner + Partner) wins by pushing the
//! Opponent's center outside the ring. Dynamics are semi-implicit Euler with
//! linear damping, followed by one pass of pairwise impulse collisions.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Length of the per-agent observation vector.
pub const OBS_DIM: usize = 14;

/// Dimension of an action (a planar force).
pub const ACTION_DIM: usize = 2;

#[derive(Debug, Error, PartialEq)]
pub enum ArenaError {
    #[error("invalid arena config: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("step called on a finished episode (outcome {0:?})")]
    Terminal(Outcome),
    #[error("non-finite action for {0:?}")]
    NonFiniteAction(Role),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Scales the vector down so that its length is at most `max`, keeping
    /// its direction. Vectors already within the bound are returned as-is.
    pub fn clamp_norm(self, max: f64) -> Vec2 {
        let n = self.norm();
        if n > max && n > 0.0 {
            self * (max / n)
        } else {
            self
        }
    }

    /// Unit vector in the same direction, or zero for vectors shorter than `eps`.
    pub fn normalized_or_zero(self, eps: f64) -> Vec2 {
        let n = self.norm();
        if n < eps {
            Vec2::ZERO
        } else {
            self * (1.0 / n)
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Learner,
    Partner,
    Opponent,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Learner, Role::Partner, Role::Opponent];

    pub fn index(self) -> usize {
        match self {
            Role::Learner => 0,
            Role::Partner => 1,
            Role::Opponent => 2,
        }
    }

    pub fn is_teammate(self) -> bool {
        !matches!(self, Role::Opponent)
    }
}

/// One value per role, indexable by [`Role`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerRole<T> {
    pub learner: T,
    pub partner: T,
    pub opponent: T,
}

impl<T> PerRole<T> {
    pub fn from_fn(mut f: impl FnMut(Role) -> T) -> Self {
        Self {
            learner: f(Role::Learner),
            partner: f(Role::Partner),
            opponent: f(Role::Opponent),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Role, &T)> {
        [
            (Role::Learner, &self.learner),
            (Role::Partner, &self.partner),
            (Role::Opponent, &self.opponent),
        ]
        .into_iter()
    }
}

impl<T> Index<Role> for PerRole<T> {
    type Output = T;
    fn index(&self, role: Role) -> &T {
        match role {
            Role::Learner => &self.learner,
            Role::Partner => &self.partner,
            Role::Opponent => &self.opponent,
        }
    }
}

impl<T> IndexMut<Role> for PerRole<T> {
    fn index_mut(&mut self, role: Role) -> &mut T {
        match role {
            Role::Learner => &mut self.learner,
            Role::Partner => &mut self.partner,
            Role::Opponent => &mut self.opponent,
        }
    }
}

/// A planar force command, in newtons.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub force: Vec2,
}

impl Action {
    pub const NONE: Action = Action { force: Vec2::ZERO };

    pub fn new(fx: f64, fy: f64) -> Self {
        Self {
            force: Vec2::new(fx, fy),
        }
    }

    pub fn clamped(self, max_force: f64) -> Action {
        Action {
            force: self.force.clamp_norm(max_force),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentBody {
    pub role: Role,
    pub pos: Vec2,
    pub vel: Vec2,
    pub mass: f64,
    pub radius: f64,
}

impl AgentBody {
    fn inv_mass(&self) -> f64 {
        1.0 / self.mass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArenaConfig {
    pub ring_radius: f64,
    pub agent_radius: f64,
    pub agent_mass: f64,
    pub dt: f64,
    /// Linear velocity damping coefficient, 1/s.
    pub friction: f64,
    pub max_force: f64,
    pub max_speed: f64,
    pub restitution: f64,
    pub max_steps: u32,
}

impl Default for ArenaConfig {
    fn default() -> Self {
        Self {
            ring_radius: 2.0,
            agent_radius: 0.15,
            agent_mass: 1.0,
            dt: 0.05,
            friction: 1.0,
            max_force: 2.0,
            max_speed: 1.5,
            restitution: 0.1,
            max_steps: 500,
        }
    }
}

impl ArenaConfig {
    pub fn validate(&self) -> Result<(), ArenaError> {
        fn bad(field: &'static str, reason: impl Into<String>) -> Result<(), ArenaError> {
            Err(ArenaError::InvalidConfig {
                field,
                reason: reason.into(),
            })
        }
        let finite = [
            ("ring_radius", self.ring_radius),
            ("agent_radius", self.agent_radius),
            ("agent_mass", self.agent_mass),
            ("dt", self.dt),
            ("friction", self.friction),
            ("max_force", self.max_force),
            ("max_speed", self.max_speed),
            ("restitution", self.restitution),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return bad(field, "must be finite");
            }
        }
        if self.agent_radius <= 0.0 {
            return bad("agent_radius", "must be > 0");
        }
        if self.agent_mass <= 0.0 {
            return bad("agent_mass", "must be > 0");
        }
        if self.ring_radius <= 2.0 * self.agent_radius {
            return bad("ring_radius", "must exceed twice the agent radius");
        }
        if self.dt <= 0.0 {
            return bad("dt", "must be > 0");
        }
        if self.friction < 0.0 {
            return bad("friction", "must be >= 0");
        }
        if self.max_force < 0.0 {
            return bad("max_force", "must be >= 0");
        }
        if self.max_speed <= 0.0 {
            return bad("max_speed", "must be > 0");
        }
        if !(0.0..=1.0).contains(&self.restitution) {
            return bad("restitution", "must lie in [0, 1]");
        }
        if self.max_steps == 0 {
            return bad("max_steps", "must be > 0");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Ongoing,
    TeamWin,
    TeamLose,
    Draw,
}

impl Outcome {
    pub fn is_terminal(self) -> bool {
        self != Outcome::Ongoing
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Ongoing => "ongoing",
            Outcome::TeamWin => "team_win",
            Outcome::TeamLose => "team_lose",
            Outcome::Draw => "draw",
        }
    }
}

/// Fixed-layout observation vector:
///
/// | idx    | content                                   |
/// |--------|-------------------------------------------|
/// | 0..2   | own position / R                          |
/// | 2..4   | own velocity / max_speed                  |
/// | 4      | edge margin (R - \|pos\|) / R             |
/// | 5..7   | slot-1 relative position / R              |
/// | 7..9   | slot-1 relative velocity / max_speed      |
/// | 9..11  | slot-2 relative position / R              |
/// | 11..13 | slot-2 relative velocity / max_speed      |
/// | 13     | step_count / max_steps                    |
///
/// Slot 1 is the other teammate for teammates and the Learner for the
/// Opponent; slot 2 is the Opponent for teammates and the Partner for the
/// Opponent.
pub type Observation = [f64; OBS_DIM];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub bodies: PerRole<AgentBody>,
    pub step_count: u32,
    pub outcome: Outcome,
    pub seed: u64,
    pub config: ArenaConfig,
}

/// Result of advancing the world by one tick.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepResult {
    pub world: WorldState,
    pub observations: PerRole<Observation>,
    pub outcome: Outcome,
}

/// Places the three agents at half the ring radius: Learner at 90°, Partner
/// at 210°, Opponent at 330°, all at rest.
///
/// Spawn placement is fixed; `seed` is recorded on the state so that any
/// per-episode randomness (scripted policies) can be keyed off it.
pub fn new_world(config: ArenaConfig, seed: u64) -> Result<WorldState, ArenaError> {
    config.validate()?;
    let spawn = |role: Role, deg: f64| {
        let r = 0.5 * config.ring_radius;
        let a = deg.to_radians();
        AgentBody {
            role,
            pos: Vec2::new(r * a.cos(), r * a.sin()),
            vel: Vec2::ZERO,
            mass: config.agent_mass,
            radius: config.agent_radius,
        }
    };
    Ok(WorldState {
        bodies: PerRole {
            learner: spawn(Role::Learner, 90.0),
            partner: spawn(Role::Partner, 210.0),
            opponent: spawn(Role::Opponent, 330.0),
        },
        step_count: 0,
        outcome: Outcome::Ongoing,
        seed,
        config,
    })
}

impl WorldState {
    pub fn body(&self, role: Role) -> &AgentBody {
        &self.bodies[role]
    }

    /// Advances one tick. The input state is left untouched.
    ///
    /// Order: clamp forces; integrate velocity, damp, clamp speed; integrate
    /// position; resolve the three pairs (L-P, L-O, P-O) once; re-clamp
    /// speed; increment the step counter; evaluate the outcome.
    pub fn step(&self, actions: &PerRole<Action>) -> Result<StepResult, ArenaError> {
        if self.outcome.is_terminal() {
            return Err(ArenaError::Terminal(self.outcome));
        }
        for (role, a) in actions.iter() {
            if !a.force.is_finite() {
                return Err(ArenaError::NonFiniteAction(role));
            }
        }
        let cfg = &self.config;
        let damping = (1.0 - cfg.friction * cfg.dt).max(0.0);
        let mut next = *self;
        for role in Role::ALL {
            let force = actions[role].clamped(cfg.max_force).force;
            let b = &mut next.bodies[role];
            b.vel += force * (cfg.dt / b.mass);
            b.vel = (b.vel * damping).clamp_norm(cfg.max_speed);
            b.pos += b.vel * cfg.dt;
        }
        for (ra, rb) in [
            (Role::Learner, Role::Partner),
            (Role::Learner, Role::Opponent),
            (Role::Partner, Role::Opponent),
        ] {
            let (a, b) = resolve_collision(next.bodies[ra], next.bodies[rb], cfg.restitution);
            next.bodies[ra] = a;
            next.bodies[rb] = b;
        }
        // Impulses can push a disc past the speed cap; the cap is a per-step invariant.
        for role in Role::ALL {
            let b = &mut next.bodies[role];
            b.vel = b.vel.clamp_norm(cfg.max_speed);
        }
        next.step_count += 1;
        next.outcome = outcome_of(&next);
        Ok(StepResult {
            world: next,
            observations: PerRole::from_fn(|r| observe(&next, r)),
            outcome: next.outcome,
        })
    }
}

/// Resolves contact between two discs with positional correction followed by
/// a normal impulse. Non-overlapping pairs are returned unchanged.
pub fn resolve_collision(mut a: AgentBody, mut b: AgentBody, restitution: f64) -> (AgentBody, AgentBody) {
    let delta = b.pos - a.pos;
    let dist = delta.norm();
    let min_dist = a.radius + b.radius;
    if dist >= min_dist {
        return (a, b);
    }
    let normal = if dist > 0.0 {
        delta * (1.0 / dist)
    } else {
        Vec2::new(1.0, 0.0)
    };
    let (inv_a, inv_b) = (a.inv_mass(), b.inv_mass());
    let inv_sum = inv_a + inv_b;

    let penetration = min_dist - dist;
    a.pos -= normal * (penetration * inv_a / inv_sum);
    b.pos += normal * (penetration * inv_b / inv_sum);

    let approach = (b.vel - a.vel).dot(normal);
    if approach < 0.0 {
        let j = -(1.0 + restitution) * approach / inv_sum;
        let impulse = normal * j;
        a.vel -= impulse * inv_a;
        b.vel += impulse * inv_b;
    }
    (a, b)
}

/// Center-point ring-out rule. Learner-out dominates (a simultaneous double
/// ring-out counts as a loss), then Opponent-out, then Partner-out, then the
/// step limit.
pub fn outcome_of(world: &WorldState) -> Outcome {
    let r = world.config.ring_radius;
    let out = |role: Role| world.bodies[role].pos.norm() > r;
    if out(Role::Learner) {
        Outcome::TeamLose
    } else if out(Role::Opponent) {
        Outcome::TeamWin
    } else if out(Role::Partner) {
        Outcome::TeamLose
    } else if world.step_count >= world.config.max_steps {
        Outcome::Draw
    } else {
        Outcome::Ongoing
    }
}

pub fn observe(world: &WorldState, role: Role) -> Observation {
    let cfg = &world.config;
    let inv_r = 1.0 / cfg.ring_radius;
    let inv_v = 1.0 / cfg.max_speed;
    let me = world.bodies[role];
    let (slot1, slot2) = match role {
        Role::Learner => (Role::Partner, Role::Opponent),
        Role::Partner => (Role::Learner, Role::Opponent),
        Role::Opponent => (Role::Learner, Role::Partner),
    };
    let mut obs = [0.0; OBS_DIM];
    obs[0] = me.pos.x * inv_r;
    obs[1] = me.pos.y * inv_r;
    obs[2] = me.vel.x * inv_v;
    obs[3] = me.vel.y * inv_v;
    obs[4] = (cfg.ring_radius - me.pos.norm()) * inv_r;
    for (offset, other) in [(5, slot1), (9, slot2)] {
        let o = world.bodies[other];
        let dp = o.pos - me.pos;
        let dv = o.vel - me.vel;
        obs[offset] = dp.x * inv_r;
        obs[offset + 1] = dp.y * inv_r;
        obs[offset + 2] = dv.x * inv_v;
        obs[offset + 3] = dv.y * inv_v;
    }
    obs[13] = world.step_count as f64 / cfg.max_steps as f64;
    obs
}
