//! Run configuration, training loop, evaluation protocol, checkpoints,
//! metrics and plots.

mod checkpoint;
mod eval;
mod metrics;
mod plot;
mod train;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{ArenaConfig, ArenaError, Outcome};
use crate::ddpg::{DdpgConfig, DdpgError};
use crate::opponents::ScriptedPolicy;
use crate::rewards::{RewardConfig, RewardError};
use crate::tinynet::NetError;

pub use checkpoint::{Checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use eval::{evaluate, evaluate_agent, rollout, rollout_to_csv, run_greedy_episode, EvalReport, RolloutStep};
pub use metrics::{read_metrics, window_stats, write_metrics_header, MetricsRow, MetricsWriter, METRICS_HEADER};
pub use plot::{plot, render_svg};
pub use train::{train, TrainSummary, Trainer};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: `{field}` {reason}")]
    Config { field: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed config JSON: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("checkpoint: bad magic {found:?} (expected {expected:?})")]
    BadMagic { found: Vec<u8>, expected: &'static [u8] },
    #[error("checkpoint: format version {found} is not supported (this build reads version {expected})")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint: {0}")]
    Corrupt(String),
    #[error("{path}:{line}: {message}")]
    Csv { path: PathBuf, line: u64, message: String },
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    Ddpg(#[from] DdpgError),
    #[error(transparent)]
    Net(#[from] NetError),
}

impl HarnessError {
    pub(crate) fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        HarnessError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub arena: ArenaConfig,
    pub reward: RewardConfig,
    pub ddpg: DdpgConfig,
    pub partner_policy: ScriptedPolicy,
    pub opponent_policy: ScriptedPolicy,
    pub episodes: u32,
    pub eval_every: u32,
    pub eval_episodes: u32,
    /// Trailing window for the training-curve statistics.
    pub metrics_window: usize,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            arena: ArenaConfig::default(),
            reward: RewardConfig::default(),
            ddpg: DdpgConfig::default(),
            partner_policy: ScriptedPolicy::Chase { gain: 1.0 },
            opponent_policy: ScriptedPolicy::Chase { gain: 1.0 },
            episodes: 5000,
            eval_every: 100,
            eval_episodes: 50,
            metrics_window: 100,
            seed: 0,
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let cfg = Self::from_json(&text).map_err(|source| HarnessError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every nested invariant; errors name the offending field with
    /// its dotted path.
    pub fn validate(&self) -> Result<(), HarnessError> {
        self.arena.validate().map_err(|e| match e {
            ArenaError::InvalidConfig { field, reason } => HarnessError::config(format!("arena.{field}"), reason),
            other => HarnessError::Arena(other),
        })?;
        self.reward.validate().map_err(|e| match e {
            RewardError::NonFinite(field) => HarnessError::config(format!("reward.{field}"), "must be finite"),
            RewardError::NegativeStepPenalty => HarnessError::config("reward.step_penalty", "must be >= 0"),
            RewardError::ConfigMismatch => HarnessError::config("reward", e.to_string()),
        })?;
        self.ddpg.validate().map_err(|e| match e {
            DdpgError::InvalidConfig { field, reason } => HarnessError::config(format!("ddpg.{field}"), reason),
            other => HarnessError::Ddpg(other),
        })?;
        for (name, p) in [
            ("partner_policy", &self.partner_policy),
            ("opponent_policy", &self.opponent_policy),
        ] {
            p.validate().map_err(|e| HarnessError::config(name, e.to_string()))?;
        }
        if self.episodes == 0 {
            return Err(HarnessError::config("episodes", "must be > 0"));
        }
        if self.eval_every == 0 {
            return Err(HarnessError::config("eval_every", "must be > 0"));
        }
        if self.eval_episodes == 0 {
            return Err(HarnessError::config("eval_episodes", "must be > 0"));
        }
        if self.metrics_window == 0 {
            return Err(HarnessError::config("metrics_window", "must be > 0"));
        }
        Ok(())
    }
}

/// Per-episode statistics of the learner's team.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub outcome: Outcome,
    pub steps: u32,
    /// Sum of learner rewards (shaped + terminal).
    #[serde(rename = "return")]
    pub episode_return: f64,
}
