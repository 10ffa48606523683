use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Checkpoint, EpisodeResult, HarnessError, RunConfig};
use crate::arena::{new_world, observe, Action, Outcome, PerRole, Role, WorldState};
use crate::ddpg::DdpgAgent;
use crate::opponents::scripted_action;
use crate::rewards::{shaped_reward, terminal_reward};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub episodes: u32,
    pub wins: u32,
    pub losses: u32,
    pub draws: u32,
    pub win_rate: f64,
    pub lose_rate: f64,
    /// `1 - (win_rate + lose_rate)`, so the three rates sum to exactly 1.
    pub draw_rate: f64,
    /// Mean episode length over wins; `None` without wins.
    pub mean_steps_to_win: Option<f64>,
}

impl EvalReport {
    pub fn from_results(results: &[EpisodeResult]) -> Self {
        let n = results.len() as u32;
        let count = |o| results.iter().filter(|r| r.outcome == o).count() as u32;
        let (wins, losses, draws) = (count(Outcome::TeamWin), count(Outcome::TeamLose), count(Outcome::Draw));
        let win_rate = wins as f64 / n as f64;
        let lose_rate = losses as f64 / n as f64;
        let win_steps: Vec<f64> = results
            .iter()
            .filter(|r| r.outcome == Outcome::TeamWin)
            .map(|r| r.steps as f64)
            .collect();
        Self {
            episodes: n,
            wins,
            losses,
            draws,
            win_rate,
            lose_rate,
            draw_rate: 1.0 - (win_rate + lose_rate),
            mean_steps_to_win: (!win_steps.is_empty()).then(|| win_steps.iter().sum::<f64>() / win_steps.len() as f64),
        }
    }
}

/// State and commands of a single tick, as written to a rollout file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RolloutStep {
    pub step: u32,
    pub world: WorldState,
    pub actions: PerRole<Action>,
    pub reward: f64,
    pub outcome: Outcome,
}

/// Plays one greedy episode; `record` receives every tick.
fn play_greedy(
    agent: &DdpgAgent,
    cfg: &RunConfig,
    seed: u64,
    mut record: impl FnMut(RolloutStep),
) -> Result<EpisodeResult, HarnessError> {
    let mut world = new_world(cfg.arena, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    loop {
        let actions = PerRole {
            learner: agent.greedy_action(&observe(&world, Role::Learner)),
            partner: scripted_action(&cfg.partner_policy, &world, Role::Partner, &mut rng),
            opponent: scripted_action(&cfg.opponent_policy, &world, Role::Opponent, &mut rng),
        };
        let applied = PerRole::from_fn(|r| actions[r].clamped(cfg.arena.max_force));
        let step = world.step(&actions)?;
        let reward = shaped_reward(&world, &step.world, &cfg.reward).expect("same episode config")
            + terminal_reward(step.outcome, &cfg.reward);
        total += reward;
        record(RolloutStep {
            step: step.world.step_count,
            world: step.world,
            actions: applied,
            reward,
            outcome: step.outcome,
        });
        world = step.world;
        if step.outcome.is_terminal() {
            return Ok(EpisodeResult {
                outcome: step.outcome,
                steps: world.step_count,
                episode_return: total,
            });
        }
    }
}

pub fn run_greedy_episode(agent: &DdpgAgent, cfg: &RunConfig, seed: u64) -> Result<EpisodeResult, HarnessError> {
    play_greedy(agent, cfg, seed, |_| {})
}

/// Greedy evaluation over `n` episodes seeded `seed, seed+1, ...`. Episodes
/// run in parallel; results are reduced in episode order.
pub fn evaluate_agent(agent: &DdpgAgent, cfg: &RunConfig, n: u32, seed: u64) -> Result<EvalReport, HarnessError> {
    let results: Vec<EpisodeResult> = (0..n)
        .into_par_iter()
        .map(|i| run_greedy_episode(agent, cfg, seed.wrapping_add(i as u64)))
        .collect::<Result<_, _>>()?;
    Ok(EvalReport::from_results(&results))
}

pub fn evaluate(checkpoint: &Checkpoint, n: u32, seed: u64) -> Result<EvalReport, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Config {
            field: "episodes".into(),
            reason: "must be > 0".into(),
        });
    }
    evaluate_agent(&checkpoint.agent, &checkpoint.config, n, seed)
}

/// One greedy episode, tick by tick.
pub fn rollout(checkpoint: &Checkpoint, seed: u64) -> Result<Vec<RolloutStep>, HarnessError> {
    let mut steps = Vec::new();
    play_greedy(&checkpoint.agent, &checkpoint.config, seed, |s| steps.push(s))?;
    Ok(steps)
}

const ROLLOUT_HEADER: &str = "step,\
learner_x,learner_y,learner_vx,learner_vy,\
partner_x,partner_y,partner_vx,partner_vy,\
opponent_x,opponent_y,opponent_vx,opponent_vy,\
learner_fx,learner_fy,partner_fx,partner_fy,opponent_fx,opponent_fy,\
reward,outcome";

/// Writes a greedy rollout as CSV: a header and one row per tick.
pub fn rollout_to_csv(checkpoint: &Checkpoint, seed: u64, out: impl AsRef<Path>) -> Result<usize, HarnessError> {
    let out = out.as_ref();
    let steps = rollout(checkpoint, seed)?;
    let mut text = String::with_capacity(64 * (steps.len() + 1));
    text.push_str(ROLLOUT_HEADER);
    text.push('\n');
    for s in &steps {
        let mut cols: Vec<String> = vec![s.step.to_string()];
        for role in Role::ALL {
            let b = s.world.bodies[role];
            cols.extend([b.pos.x, b.pos.y, b.vel.x, b.vel.y].map(|v| v.to_string()));
        }
        for role in Role::ALL {
            let f = s.actions[role].force;
            cols.extend([f.x, f.y].map(|v| v.to_string()));
        }
        cols.push(s.reward.to_string());
        cols.push(s.outcome.as_str().to_string());
        text.push_str(&cols.join(","));
        text.push('\n');
    }
    let mut file = std::fs::File::create(out).map_err(|e| HarnessError::io(out, e))?;
    file.write_all(text.as_bytes()).map_err(|e| HarnessError::io(out, e))?;
    Ok(steps.len())
}
