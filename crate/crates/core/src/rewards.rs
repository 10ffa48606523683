//! Learner-centric reward: dense shaping terms plus a sparse terminal bonus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Outcome, Role, WorldState};

/// Fraction of the ring radius beyond which the edge penalty starts.
pub const EDGE_HINGE: f64 = 0.8;

#[derive(Debug, Error, PartialEq)]
pub enum RewardError {
    #[error("reward weight `{0}` must be finite")]
    NonFinite(&'static str),
    #[error("step_penalty must be >= 0")]
    NegativeStepPenalty,
    #[error("states come from different arena configs")]
    ConfigMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewardConfig {
    /// Weight on the decrease of learner-opponent distance, 1/m.
    pub w_dist: f64,
    /// Weight on learner velocity projected toward the opponent, s/m.
    pub w_vel: f64,
    /// Weight of the hinge penalty near the ring edge.
    pub w_ring: f64,
    pub step_penalty: f64,
    pub r_win: f64,
    pub r_lose: f64,
    pub r_draw: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            w_dist: 10.0,
            w_vel: 1.0,
            w_ring: 5.0,
            step_penalty: 0.01,
            r_win: 100.0,
            r_lose: -100.0,
            r_draw: -20.0,
        }
    }
}

impl RewardConfig {
    /// All weights zero.
    pub fn zero() -> Self {
        Self {
            w_dist: 0.0,
            w_vel: 0.0,
            w_ring: 0.0,
            step_penalty: 0.0,
            r_win: 0.0,
            r_lose: 0.0,
            r_draw: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), RewardError> {
        for (name, v) in [
            ("w_dist", self.w_dist),
            ("w_vel", self.w_vel),
            ("w_ring", self.w_ring),
            ("step_penalty", self.step_penalty),
            ("r_win", self.r_win),
            ("r_lose", self.r_lose),
            ("r_draw", self.r_draw),
        ] {
            if !v.is_finite() {
                return Err(RewardError::NonFinite(name));
            }
        }
        if self.step_penalty < 0.0 {
            return Err(RewardError::NegativeStepPenalty);
        }
        if !(self.r_win > self.r_draw && self.r_draw > self.r_lose) {
            log::warn!(
                "terminal rewards are not ordered win > draw > lose (win={}, draw={}, lose={})",
                self.r_win,
                self.r_draw,
                self.r_lose
            );
        }
        Ok(())
    }
}

fn learner_opponent_distance(w: &WorldState) -> f64 {
    (w.bodies[Role::Opponent].pos - w.bodies[Role::Learner].pos).norm()
}

/// The distance-decrease term alone, `w_dist * (d_prev - d_cur)`.
pub fn distance_term(prev: &WorldState, cur: &WorldState, cfg: &RewardConfig) -> f64 {
    cfg.w_dist * (learner_opponent_distance(prev) - learner_opponent_distance(cur))
}

/// Dense per-step reward for the learner going from `prev` to `cur`:
/// distance decrease to the opponent, velocity toward the opponent, a hinge
/// penalty past 80% of the ring radius, and a constant step penalty.
pub fn shaped_reward(prev: &WorldState, cur: &WorldState, cfg: &RewardConfig) -> Result<f64, RewardError> {
    if prev.config != cur.config {
        return Err(RewardError::ConfigMismatch);
    }
    let learner = cur.bodies[Role::Learner];
    let toward = cur.bodies[Role::Opponent].pos - learner.pos;
    let unit = toward.normalized_or_zero(1e-9);
    let radial = learner.pos.norm() / cur.config.ring_radius;

    let dist = distance_term(prev, cur, cfg);
    let vel = cfg.w_vel * learner.vel.dot(unit);
    let ring = cfg.w_ring * (radial - EDGE_HINGE).max(0.0);
    Ok(dist + vel - ring - cfg.step_penalty)
}

pub fn terminal_reward(outcome: Outcome, cfg: &RewardConfig) -> f64 {
    match outcome {
        Outcome::Ongoing => 0.0,
        Outcome::TeamWin => cfg.r_win,
        Outcome::TeamLose => cfg.r_lose,
        Outcome::Draw => cfg.r_draw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{new_world, ArenaConfig, Vec2};

    fn only(f: impl FnOnce(&mut RewardConfig)) -> RewardConfig {
        let mut c = RewardConfig::zero();
        f(&mut c);
        c
    }

    #[test]
    fn idle_step_pays_only_the_penalty() {
        let w = new_world(ArenaConfig::default(), 0).unwrap();
        let cfg = only(|c| c.step_penalty = 0.01);
        assert_eq!(shaped_reward(&w, &w, &cfg).unwrap(), -0.01);
        let all = RewardConfig {
            step_penalty: 0.01,
            ..Default::default()
        };
        assert!((shaped_reward(&w, &w, &all).unwrap() + 0.01).abs() < 1e-15);
    }

    #[test]
    fn closing_distance_by_a_tenth() {
        let mut prev = new_world(ArenaConfig::default(), 0).unwrap();
        prev.bodies.learner.pos = Vec2::new(0.0, 0.0);
        prev.bodies.opponent.pos = Vec2::new(1.0, 0.0);
        let mut cur = prev;
        cur.bodies.learner.pos = Vec2::new(0.1, 0.0);
        let cfg = only(|c| c.w_dist = 10.0);
        let r = shaped_reward(&prev, &cur, &cfg).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn ring_hinge_inactive_at_center_and_active_near_edge() {
        let mut w = new_world(ArenaConfig::default(), 0).unwrap();
        w.bodies.learner.pos = Vec2::ZERO;
        let cfg = only(|c| c.w_ring = 5.0);
        assert_eq!(shaped_reward(&w, &w, &cfg).unwrap(), 0.0);
        w.bodies.learner.pos = Vec2::new(0.0, 1.8);
        let r = shaped_reward(&w, &w, &cfg).unwrap();
        assert!((r + 5.0 * 0.1).abs() < 1e-12, "{r}");
    }

    #[test]
    fn velocity_term_is_signed() {
        let mut w = new_world(ArenaConfig::default(), 0).unwrap();
        w.bodies.learner.pos = Vec2::ZERO;
        w.bodies.opponent.pos = Vec2::new(1.0, 0.0);
        w.bodies.learner.vel = Vec2::new(-0.5, 0.3);
        let cfg = only(|c| c.w_vel = 2.0);
        assert!((shaped_reward(&w, &w, &cfg).unwrap() + 1.0).abs() < 1e-15);
        // coincident learner/opponent: direction undefined, term is zero
        w.bodies.opponent.pos = Vec2::ZERO;
        assert_eq!(shaped_reward(&w, &w, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_configs_rejected() {
        let a = new_world(ArenaConfig::default(), 0).unwrap();
        let b = new_world(
            ArenaConfig {
                dt: 0.1,
                ..Default::default()
            },
            0,
        )
        .unwrap();
        assert_eq!(
            shaped_reward(&a, &b, &RewardConfig::default()),
            Err(RewardError::ConfigMismatch)
        );
    }

    #[test]
    fn terminal_lookup() {
        let cfg = RewardConfig {
            r_win: 100.0,
            r_draw: -10.0,
            ..Default::default()
        };
        assert_eq!(terminal_reward(Outcome::Ongoing, &cfg), 0.0);
        assert_eq!(terminal_reward(Outcome::TeamWin, &cfg), 100.0);
        assert_eq!(terminal_reward(Outcome::Draw, &cfg), -10.0);
        assert_eq!(terminal_reward(Outcome::TeamLose, &cfg), -100.0);
    }

    #[test]
    fn validation() {
        assert!(RewardConfig::default().validate().is_ok());
        let bad = RewardConfig {
            w_vel: f64::NAN,
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(RewardError::NonFinite("w_vel")));
        let bad = RewardConfig {
            step_penalty: -1.0,
            ..Default::default()
        };
        assert_eq!(bad.validate(), Err(RewardError::NegativeStepPenalty));
        // misordered terminals only warn
        let odd = RewardConfig {
            r_win: -5.0,
            ..Default::default()
        };
        assert!(odd.validate().is_ok());
    }
}
