//! Binary checkpoint format.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic            8 bytes  "TRISUMO1"
//! format_version   u32
//! config_len       u64      followed by config_len bytes of RunConfig JSON
//! arrays           8 x (u64 length + length x f64), in order:
//!                  actor, critic, actor_target, critic_target,
//!                  actor_adam.m, actor_adam.v, critic_adam.m, critic_adam.v
//! adam steps       u64 actor_adam.t, u64 critic_adam.t
//! noise            2 x f64  OU state
//! agent rng        32-byte ChaCha seed, u64 stream, u128 word position
//! env rng          same layout as the agent rng
//! episode          u64      episodes completed
//! total_steps      u64      environment steps taken
//! ```
//!
//! Network shapes and Adam learning rates are rebuilt from the embedded
//! config; Adam β1/β2/ε are the library defaults.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, RunConfig};
use crate::arena::{ACTION_DIM, OBS_DIM};
use crate::ddpg::{DdpgAgent, NoiseState, CRITIC_INPUT_DIM};
use crate::tinynet::{param_count, AdamState, Mlp, OutputHead};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"TRISUMO1";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub config: RunConfig,
    pub agent: DdpgAgent,
    pub env_rng: ChaCha8Rng,
    pub episode: u64,
    pub total_steps: u64,
}

fn put_rng(out: &mut Vec<u8>, rng: &ChaCha8Rng) {
    out.extend_from_slice(&rng.get_seed());
    out.extend_from_slice(&rng.get_stream().to_le_bytes());
    out.extend_from_slice(&rng.get_word_pos().to_le_bytes());
}

fn put_array(out: &mut Vec<u8>, values: &[f64]) {
    out.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], HarnessError> {
        if self.buf.len() - self.pos < n {
            return Err(HarnessError::Corrupt(format!(
                "truncated while reading {what} at byte {} ({} bytes total)",
                self.pos,
                self.buf.len()
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn array<const N: usize>(&mut self, what: &str) -> Result<[u8; N], HarnessError> {
        Ok(self.take(N, what)?.try_into().expect("length checked"))
    }

    fn u32(&mut self, what: &str) -> Result<u32, HarnessError> {
        Ok(u32::from_le_bytes(self.array(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64, HarnessError> {
        Ok(u64::from_le_bytes(self.array(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64, HarnessError> {
        Ok(f64::from_le_bytes(self.array(what)?))
    }

    fn f64s(&mut self, what: &str, expected: usize) -> Result<Vec<f64>, HarnessError> {
        let n = self.u64(what)? as usize;
        if n != expected {
            return Err(HarnessError::Corrupt(format!(
                "{what}: {n} values stored, config implies {expected}"
            )));
        }
        let bytes = self.take(n * 8, what)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect())
    }

    fn rng(&mut self, what: &str) -> Result<ChaCha8Rng, HarnessError> {
        let seed: [u8; 32] = self.array(what)?;
        let stream = self.u64(what)?;
        let word_pos = u128::from_le_bytes(self.array(what)?);
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(stream);
        rng.set_word_pos(word_pos);
        Ok(rng)
    }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let a = &self.agent;
        let config = serde_json::to_vec(&self.config).expect("config serializes");
        let mut out = Vec::with_capacity(256 + config.len() + 8 * 4 * (a.actor.num_params() + a.critic.num_params()));
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
        out.extend_from_slice(&(config.len() as u64).to_le_bytes());
        out.extend_from_slice(&config);
        for arr in [
            a.actor.params(),
            a.critic.params(),
            a.actor_target.params(),
            a.critic_target.params(),
            &a.actor_opt.m,
            &a.actor_opt.v,
            &a.critic_opt.m,
            &a.critic_opt.v,
        ] {
            put_array(&mut out, arr);
        }
        out.extend_from_slice(&a.actor_opt.t.to_le_bytes());
        out.extend_from_slice(&a.critic_opt.t.to_le_bytes());
        for x in a.noise.x {
            out.extend_from_slice(&x.to_le_bytes());
        }
        put_rng(&mut out, &a.rng);
        put_rng(&mut out, &self.env_rng);
        out.extend_from_slice(&self.episode.to_le_bytes());
        out.extend_from_slice(&self.total_steps.to_le_bytes());
        out
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, HarnessError> {
        let mut r = Reader { buf, pos: 0 };
        let magic = r.take(CHECKPOINT_MAGIC.len(), "magic").map_err(|_| HarnessError::BadMagic {
            found: buf.to_vec(),
            expected: CHECKPOINT_MAGIC,
        })?;
        if magic != CHECKPOINT_MAGIC {
            return Err(HarnessError::BadMagic {
                found: magic.to_vec(),
                expected: CHECKPOINT_MAGIC,
            });
        }
        let version = r.u32("format_version")?;
        if version != CHECKPOINT_VERSION {
            return Err(HarnessError::Version {
                found: version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let config_len = r.u64("config length")? as usize;
        let config_bytes = r.take(config_len, "config block")?;
        let config: RunConfig = serde_json::from_slice(config_bytes)
            .map_err(|e| HarnessError::Corrupt(format!("config block: {e}")))?;
        config.validate()?;

        let hidden = &config.ddpg.hidden;
        let dims = |input: usize, output: usize| {
            let mut d = vec![input];
            d.extend_from_slice(hidden);
            d.push(output);
            d
        };
        let actor_dims = dims(OBS_DIM, ACTION_DIM);
        let critic_dims = dims(CRITIC_INPUT_DIM, 1);
        let actor_head = OutputHead::TanhScaled {
            bound: config.arena.max_force,
        };
        let n_actor = param_count(&actor_dims);
        let n_critic = param_count(&critic_dims);

        let actor = Mlp::from_parts(&actor_dims, actor_head, r.f64s("actor", n_actor)?)?;
        let critic = Mlp::from_parts(&critic_dims, OutputHead::Linear, r.f64s("critic", n_critic)?)?;
        let actor_target = Mlp::from_parts(&actor_dims, actor_head, r.f64s("actor_target", n_actor)?)?;
        let critic_target = Mlp::from_parts(&critic_dims, OutputHead::Linear, r.f64s("critic_target", n_critic)?)?;
        let mut actor_opt = AdamState::new(n_actor, config.ddpg.lr_actor);
        let mut critic_opt = AdamState::new(n_critic, config.ddpg.lr_critic);
        actor_opt.m = r.f64s("actor_adam.m", n_actor)?;
        actor_opt.v = r.f64s("actor_adam.v", n_actor)?;
        critic_opt.m = r.f64s("critic_adam.m", n_critic)?;
        critic_opt.v = r.f64s("critic_adam.v", n_critic)?;
        actor_opt.t = r.u64("actor_adam.t")?;
        critic_opt.t = r.u64("critic_adam.t")?;
        let noise = NoiseState {
            x: [r.f64("noise")?, r.f64("noise")?],
        };
        let agent_rng = r.rng("agent rng")?;
        let env_rng = r.rng("env rng")?;
        let episode = r.u64("episode")?;
        let total_steps = r.u64("total_steps")?;
        if r.pos != buf.len() {
            return Err(HarnessError::Corrupt(format!(
                "{} trailing bytes after total_steps",
                buf.len() - r.pos
            )));
        }

        let agent = DdpgAgent {
            actor,
            critic,
            actor_target,
            critic_target,
            actor_opt,
            critic_opt,
            noise,
            action_bound: config.arena.max_force,
            config: config.ddpg.clone(),
            rng: agent_rng,
        };
        Ok(Self {
            config,
            agent,
            env_rng,
            episode,
            total_steps,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_bytes()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}
