use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::eval::{evaluate_agent, EvalReport};
use super::metrics::{window_stats, MetricsRow, MetricsWriter};
use super::{Checkpoint, EpisodeResult, HarnessError, RunConfig};
use crate::arena::{new_world, observe, PerRole, Role};
use crate::ddpg::{DdpgAgent, ReplayBuffer, Transition};
use crate::opponents::scripted_action;
use crate::rewards::{shaped_reward, terminal_reward};

/// Stream of the ChaCha generator that drives the scripted policies.
const ENV_STREAM: u64 = 1;

/// Sequential DDPG training state for one run.
pub struct Trainer {
    cfg: RunConfig,
    agent: DdpgAgent,
    buffer: ReplayBuffer,
    env_rng: ChaCha8Rng,
    total_steps: u64,
    updates: u64,
    history: Vec<EpisodeResult>,
}

impl Trainer {
    pub fn new(cfg: RunConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let agent = DdpgAgent::new(cfg.ddpg.clone(), cfg.arena.max_force, cfg.seed)?;
        let mut env_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        env_rng.set_stream(ENV_STREAM);
        Ok(Self {
            buffer: ReplayBuffer::new(cfg.ddpg.buffer_capacity),
            agent,
            env_rng,
            total_steps: 0,
            updates: 0,
            history: Vec::new(),
            cfg,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn agent(&self) -> &DdpgAgent {
        &self.agent
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn history(&self) -> &[EpisodeResult] {
        &self.history
    }

    pub fn total_steps(&self) -> u64 {
        self.total_steps
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    /// Plays one exploratory episode, storing every transition and running
    /// one DDPG update per step once warmup is over.
    pub fn run_episode(&mut self) -> Result<EpisodeResult, HarnessError> {
        let cfg = &self.cfg;
        let episode = self.history.len() as u64;
        let mut world = new_world(cfg.arena, cfg.seed.wrapping_add(episode))?;
        self.agent.reset_noise();
        let mut total = 0.0;
        loop {
            let obs = observe(&world, Role::Learner);
            let learner = self.agent.act(&obs, true);
            let actions = PerRole {
                learner,
                partner: scripted_action(&cfg.partner_policy, &world, Role::Partner, &mut self.env_rng),
                opponent: scripted_action(&cfg.opponent_policy, &world, Role::Opponent, &mut self.env_rng),
            };
            let step = world.step(&actions)?;
            let reward = shaped_reward(&world, &step.world, &cfg.reward).expect("same episode config")
                + terminal_reward(step.outcome, &cfg.reward);
            total += reward;
            let done = step.outcome.is_terminal();
            self.buffer.push(Transition {
                obs,
                action: [learner.force.x, learner.force.y],
                reward,
                next_obs: step.observations.learner,
                done,
            });
            self.total_steps += 1;

            if self.total_steps >= cfg.ddpg.warmup_steps && self.buffer.len() >= cfg.ddpg.batch_size {
                let batch = self.buffer.sample(cfg.ddpg.batch_size, &mut self.agent.rng)?;
                self.agent.update(&batch)?;
                self.updates += 1;
            }

            world = step.world;
            if done {
                let result = EpisodeResult {
                    outcome: step.outcome,
                    steps: world.step_count,
                    episode_return: total,
                };
                self.history.push(result);
                return Ok(result);
            }
        }
    }

    /// Greedy evaluation of the current policy; seeds depend only on the run
    /// seed and the number of completed episodes.
    pub fn evaluate(&self, episodes: u32) -> Result<EvalReport, HarnessError> {
        let seed = self
            .cfg
            .seed
            .wrapping_add(1 << 32)
            .wrapping_add((self.history.len() as u64).wrapping_mul(100_003));
        evaluate_agent(&self.agent, &self.cfg, episodes, seed)
    }

    /// Training-curve row for the latest episode.
    pub fn metrics_row(&self, eval: Option<&EvalReport>) -> MetricsRow {
        let last = self.history.len().checked_sub(1).expect("at least one episode played");
        let (win_rate, steps, ret) = window_stats(&self.history, last, self.cfg.metrics_window);
        MetricsRow {
            episode: self.history.len() as u64,
            win_rate_window: win_rate,
            mean_steps_to_win_window: steps,
            mean_return_window: ret,
            eval_win_rate: eval.map(|e| e.win_rate),
        }
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            config: self.cfg.clone(),
            agent: self.agent.clone(),
            env_rng: self.env_rng.clone(),
            episode: self.history.len() as u64,
            total_steps: self.total_steps,
        }
    }
}

/// Files produced by [`train`].
#[derive(Clone, Debug)]
pub struct TrainSummary {
    pub metrics_path: PathBuf,
    pub final_checkpoint: PathBuf,
    pub evaluations: Vec<(u64, EvalReport)>,
    pub history: Vec<EpisodeResult>,
    pub updates: u64,
}

/// Runs the full training protocol and writes `metrics.csv`, a
/// `config.json` snapshot, `checkpoint_epNNNNNN.bin` at every evaluation and
/// `checkpoint_final.bin` into the output directory.
pub fn train(cfg: &RunConfig) -> Result<TrainSummary, HarnessError> {
    cfg.validate()?;
    let out_dir = cfg.output_dir.clone().ok_or_else(|| HarnessError::Config {
        field: "output_dir".into(),
        reason: "must be set".into(),
    })?;
    std::fs::create_dir_all(&out_dir).map_err(|e| HarnessError::io(&out_dir, e))?;
    let metrics_path = out_dir.join("metrics.csv");
    let mut metrics = MetricsWriter::create(&metrics_path)?;
    let config_path = out_dir.join("config.json");
    std::fs::write(&config_path, cfg.to_json_pretty()).map_err(|e| HarnessError::io(&config_path, e))?;

    let mut trainer = Trainer::new(cfg.clone())?;
    let mut evaluations = Vec::new();
    for _ in 0..cfg.episodes {
        trainer.run_episode()?;
        let episode = trainer.history().len() as u64;
        let eval = if episode.is_multiple_of(cfg.eval_every as u64) {
            let report = trainer.evaluate(cfg.eval_episodes)?;
            log::info!(
                "episode {episode}: eval win {:.2} lose {:.2} draw {:.2}, {} updates",
                report.win_rate,
                report.lose_rate,
                report.draw_rate,
                trainer.updates()
            );
            trainer
                .checkpoint()
                .save(out_dir.join(format!("checkpoint_ep{episode:06}.bin")))?;
            Some(report)
        } else {
            None
        };
        let row = trainer.metrics_row(eval.as_ref());
        log::debug!("{row:?}");
        metrics.append(&row)?;
        if let Some(report) = eval {
            evaluations.push((episode, report));
        }
    }
    let final_checkpoint = out_dir.join("checkpoint_final.bin");
    trainer.checkpoint().save(&final_checkpoint)?;
    Ok(TrainSummary {
        metrics_path,
        final_checkpoint,
        evaluations,
        updates: trainer.updates(),
        history: trainer.history,
    })
}
