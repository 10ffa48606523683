//! DDPG learner for the added teammate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{Action, Observation, Vec2, ACTION_DIM, OBS_DIM};
use crate::tinynet::{AdamState, Grads, Mlp, NetError, OutputHead};

pub const CRITIC_INPUT_DIM: usize = OBS_DIM + ACTION_DIM;

#[derive(Debug, Error, PartialEq)]
pub enum DdpgError {
    #[error("replay buffer holds {have} transitions, {need} requested")]
    InsufficientData { have: usize, need: usize },
    #[error("update called with an empty batch")]
    EmptyBatch,
    #[error("invalid ddpg config: `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub obs: Observation,
    /// Post-clamp action actually applied.
    pub action: [f64; ACTION_DIM],
    pub reward: f64,
    pub next_obs: Observation,
    pub done: bool,
}

/// Fixed-capacity ring of transitions; the oldest entry is overwritten once full.
#[derive(Clone, Debug)]
pub struct ReplayBuffer {
    capacity: usize,
    storage: Vec<Transition>,
    write_index: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be > 0");
        Self {
            capacity,
            storage: Vec::with_capacity(capacity.min(1 << 16)),
            write_index: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    pub fn push(&mut self, t: Transition) {
        if self.storage.len() < self.capacity {
            self.storage.push(t);
        } else {
            self.storage[self.write_index] = t;
        }
        self.write_index = (self.write_index + 1) % self.capacity;
    }

    /// Contents in insertion order, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        let split = if self.storage.len() < self.capacity {
            0
        } else {
            self.write_index
        };
        self.storage[split..].iter().chain(&self.storage[..split])
    }

    /// Uniform sample with replacement.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<&Transition>, DdpgError> {
        if self.storage.len() < n || self.storage.is_empty() {
            return Err(DdpgError::InsufficientData {
                have: self.storage.len(),
                need: n,
            });
        }
        let len = self.storage.len();
        Ok((0..n).map(|_| &self.storage[rng.random_range(0..len)]).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseConfig {
    /// Ornstein-Uhlenbeck process, in units of the action bound.
    Ou { theta: f64, sigma: f64, mu: f64, dt: f64 },
    /// Uncorrelated Gaussian noise, in units of the action bound.
    Gaussian { sigma: f64 },
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig::Ou {
            theta: 0.15,
            sigma: 0.2,
            mu: 0.0,
            dt: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseState {
    pub x: [f64; ACTION_DIM],
}

/// One Euler-Maruyama step of the OU process:
/// `x += theta*(mu - x)*dt + sigma*sqrt(dt)*z`, `z ~ N(0, I)`.
pub fn ou_step<R: Rng + ?Sized>(
    state: NoiseState,
    theta: f64,
    sigma: f64,
    mu: f64,
    dt: f64,
    rng: &mut R,
) -> ([f64; ACTION_DIM], NoiseState) {
    let diffusion = sigma * dt.sqrt();
    let mut x = state.x;
    for xi in &mut x {
        let z: f64 = rng.sample(StandardNormal);
        *xi += theta * (mu - *xi) * dt + diffusion * z;
    }
    (x, NoiseState { x })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DdpgConfig {
    pub gamma: f64,
    pub tau: f64,
    pub lr_actor: f64,
    pub lr_critic: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    /// Environment steps collected before the first update.
    pub warmup_steps: u64,
    /// Hidden layer widths shared by actor and critic.
    pub hidden: Vec<usize>,
    pub noise: NoiseConfig,
}

impl Default for DdpgConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            tau: 0.005,
            lr_actor: 1e-4,
            lr_critic: 1e-3,
            batch_size: 128,
            buffer_capacity: 100_000,
            warmup_steps: 1000,
            hidden: vec![64, 64],
            noise: NoiseConfig::default(),
        }
    }
}

impl DdpgConfig {
    pub fn validate(&self) -> Result<(), DdpgError> {
        let bad = |field, reason: &str| {
            Err(DdpgError::InvalidConfig {
                field,
                reason: reason.to_string(),
            })
        };
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma", "must lie in [0, 1)");
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau", "must lie in (0, 1]");
        }
        if !(self.lr_actor.is_finite() && self.lr_actor > 0.0) {
            return bad("lr_actor", "must be finite and > 0");
        }
        if !(self.lr_critic.is_finite() && self.lr_critic > 0.0) {
            return bad("lr_critic", "must be finite and > 0");
        }
        if self.batch_size == 0 {
            return bad("batch_size", "must be > 0");
        }
        if self.buffer_capacity == 0 {
            return bad("buffer_capacity", "must be > 0");
        }
        if self.batch_size > self.buffer_capacity {
            return bad("batch_size", "must not exceed buffer_capacity");
        }
        if self.hidden.contains(&0) {
            return bad("hidden", "widths must be > 0");
        }
        let ok = match self.noise {
            NoiseConfig::Ou { theta, sigma, mu, dt } => {
                theta >= 0.0 && sigma >= 0.0 && mu.is_finite() && dt > 0.0 && theta.is_finite() && sigma.is_finite() && dt.is_finite()
            }
            NoiseConfig::Gaussian { sigma } => sigma.is_finite() && sigma >= 0.0,
        };
        if !ok {
            return bad("noise", "parameters must be finite with theta, sigma >= 0 and dt > 0");
        }
        Ok(())
    }

    fn net_dims(&self, input: usize, output: usize) -> Vec<usize> {
        let mut dims = Vec::with_capacity(self.hidden.len() + 2);
        dims.push(input);
        dims.extend_from_slice(&self.hidden);
        dims.push(output);
        dims
    }
}

/// Scalar losses measured before the optimizer steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateStats {
    pub critic_loss: f64,
    pub actor_loss: f64,
}

#[derive(Clone, Debug)]
pub struct DdpgAgent {
    pub actor: Mlp,
    pub critic: Mlp,
    pub actor_target: Mlp,
    pub critic_target: Mlp,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
    pub noise: NoiseState,
    pub config: DdpgConfig,
    pub action_bound: f64,
    pub rng: ChaCha8Rng,
}

impl DdpgAgent {
    pub fn new(config: DdpgConfig, action_bound: f64, seed: u64) -> Result<Self, DdpgError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let actor = Mlp::init(
            &config.net_dims(OBS_DIM, ACTION_DIM),
            OutputHead::TanhScaled { bound: action_bound },
            rng.random(),
        )?;
        let critic = Mlp::init(&config.net_dims(CRITIC_INPUT_DIM, 1), OutputHead::Linear, rng.random())?;
        Ok(Self::from_networks(actor, critic, config, action_bound, rng))
    }

    /// Assembles an agent around given online networks; targets start as copies.
    pub fn from_networks(actor: Mlp, critic: Mlp, config: DdpgConfig, action_bound: f64, rng: ChaCha8Rng) -> Self {
        let actor_opt = AdamState::new(actor.num_params(), config.lr_actor);
        let critic_opt = AdamState::new(critic.num_params(), config.lr_critic);
        Self {
            actor_target: actor.clone(),
            critic_target: critic.clone(),
            actor,
            critic,
            actor_opt,
            critic_opt,
            noise: NoiseState::default(),
            config,
            action_bound,
            rng,
        }
    }

    /// Restarts the exploration process at its mean (call at episode start).
    pub fn reset_noise(&mut self) {
        let mu = match self.config.noise {
            NoiseConfig::Ou { mu, .. } => mu,
            NoiseConfig::Gaussian { .. } => 0.0,
        };
        self.noise = NoiseState { x: [mu; ACTION_DIM] };
    }

    fn noise_sample(&mut self) -> [f64; ACTION_DIM] {
        match self.config.noise {
            NoiseConfig::Ou { theta, sigma, mu, dt } => {
                let (x, next) = ou_step(self.noise, theta, sigma, mu, dt, &mut self.rng);
                self.noise = next;
                x
            }
            NoiseConfig::Gaussian { sigma } => {
                let mut x = [0.0; ACTION_DIM];
                for xi in &mut x {
                    let z: f64 = self.rng.sample(StandardNormal);
                    *xi = sigma * z;
                }
                x
            }
        }
    }

    fn raw_action(&self, obs: &Observation) -> Vec2 {
        let out = self.actor.predict(obs).expect("observation width matches actor input");
        Vec2::new(out[0], out[1])
    }

    /// Deterministic policy action; equivalent to `act(obs, false)` without
    /// needing mutable access.
    pub fn greedy_action(&self, obs: &Observation) -> Action {
        Action {
            force: self.raw_action(obs),
        }
        .clamped(self.action_bound)
    }

    /// Policy action, optionally perturbed by exploration noise, clamped by
    /// magnitude to the action bound.
    pub fn act(&mut self, obs: &Observation, explore: bool) -> Action {
        let mut force = self.raw_action(obs);
        if explore {
            let n = self.noise_sample();
            force += Vec2::new(n[0], n[1]) * self.action_bound;
        }
        Action { force }.clamped(self.action_bound)
    }

    /// Bootstrapped critic targets `r + γ (1 - done) Q'(s', μ'(s'))`.
    /// Terminal transitions get exactly `r`.
    pub fn targets(&self, batch: &[&Transition]) -> Result<Vec<f64>, DdpgError> {
        let n = batch.len();
        let next_obs: Vec<f64> = batch.iter().flat_map(|t| t.next_obs).collect();
        let next_act = self.actor_target.predict_batch(&next_obs, n)?;
        let critic_in = concat_rows(&next_obs, OBS_DIM, &next_act, ACTION_DIM);
        let q_next = self.critic_target.predict_batch(&critic_in, n)?;
        Ok(batch
            .iter()
            .zip(q_next)
            .map(|(t, q)| {
                if t.done {
                    t.reward
                } else {
                    t.reward + self.config.gamma * q
                }
            })
            .collect())
    }

    /// One DDPG step: critic regression, actor ascent on Q, Polyak targets.
    pub fn update(&mut self, batch: &[&Transition]) -> Result<UpdateStats, DdpgError> {
        if batch.is_empty() {
            return Err(DdpgError::EmptyBatch);
        }
        let y = self.targets(batch)?;

        let obs: Vec<f64> = batch.iter().flat_map(|t| t.obs).collect();
        let act: Vec<f64> = batch.iter().flat_map(|t| t.action).collect();
        let critic_in = concat_rows(&obs, OBS_DIM, &act, ACTION_DIM);
        let (critic_loss, critic_grads) = critic_mse_grad(&self.critic, &critic_in, &y)?;
        self.critic.adam_step(&critic_grads, &mut self.critic_opt)?;

        let (actor_loss, actor_grads) = actor_objective_grad(&self.actor, &self.critic, &obs)?;
        self.actor.adam_step(&actor_grads, &mut self.actor_opt)?;

        soft_update(&mut self.actor_target, &self.actor, self.config.tau)?;
        soft_update(&mut self.critic_target, &self.critic, self.config.tau)?;
        Ok(UpdateStats {
            critic_loss,
            actor_loss,
        })
    }
}

/// Joins two row-major matrices side by side.
pub fn concat_rows(a: &[f64], a_cols: usize, b: &[f64], b_cols: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    for (ra, rb) in a.chunks_exact(a_cols).zip(b.chunks_exact(b_cols)) {
        out.extend_from_slice(ra);
        out.extend_from_slice(rb);
    }
    out
}

/// Mean squared error of the critic against `targets` and its parameter gradient.
pub fn critic_mse_grad(critic: &Mlp, inputs: &[f64], targets: &[f64]) -> Result<(f64, Grads), DdpgError> {
    let n = targets.len();
    if n == 0 {
        return Err(DdpgError::EmptyBatch);
    }
    let (q, cache) = critic.forward_batch(inputs, n)?;
    let inv_n = 1.0 / n as f64;
    let loss = q.iter().zip(targets).map(|(q, y)| (q - y) * (q - y)).sum::<f64>() * inv_n;
    let upstream: Vec<f64> = q.iter().zip(targets).map(|(q, y)| 2.0 * (q - y) * inv_n).collect();
    let (grads, _) = critic.backward(&cache, &upstream)?;
    Ok((loss, grads))
}

/// `-mean Q(s, μ(s))` and its gradient with respect to the actor parameters,
/// holding the critic fixed.
pub fn actor_objective_grad(actor: &Mlp, critic: &Mlp, obs: &[f64]) -> Result<(f64, Grads), DdpgError> {
    let n = obs.len() / actor.input_dim();
    if n == 0 {
        return Err(DdpgError::EmptyBatch);
    }
    let action_dim = actor.output_dim();
    let (act, actor_cache) = actor.forward_batch(obs, n)?;
    let critic_in = concat_rows(obs, actor.input_dim(), &act, action_dim);
    let (q, critic_cache) = critic.forward_batch(&critic_in, n)?;
    let inv_n = 1.0 / n as f64;
    let loss = -q.iter().sum::<f64>() * inv_n;
    let d_in = critic.input_gradient(&critic_cache, &vec![-inv_n; n])?;
    let obs_dim = critic.input_dim() - action_dim;
    let d_act: Vec<f64> = d_in
        .chunks_exact(critic.input_dim())
        .flat_map(|row| row[obs_dim..].iter().copied())
        .collect();
    let (grads, _) = actor.backward(&actor_cache, &d_act)?;
    Ok((loss, grads))
}

/// Polyak averaging `θ' ← τ θ + (1 - τ) θ'`.
pub fn soft_update(target: &mut Mlp, online: &Mlp, tau: f64) -> Result<(), NetError> {
    if target.dims() != online.dims() {
        return Err(NetError::Shape {
            expected: target.num_params(),
            got: online.num_params(),
        });
    }
    let keep = 1.0 - tau;
    for (t, &o) in target.params_mut().iter_mut().zip(online.params()) {
        *t = tau * o + keep * *t;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tinynet::{finite_diff_grad, max_relative_error};

    fn transition(tag: f64, done: bool) -> Transition {
        Transition {
            obs: [tag; OBS_DIM],
            action: [tag, -tag],
            reward: tag,
            next_obs: [tag + 0.5; OBS_DIM],
            done,
        }
    }

    fn small_config() -> DdpgConfig {
        DdpgConfig {
            hidden: vec![6],
            batch_size: 4,
            buffer_capacity: 16,
            ..Default::default()
        }
    }

    #[test]
    fn ring_semantics() {
        let mut buf = ReplayBuffer::new(2);
        buf.push(transition(1.0, false));
        assert_eq!(buf.len(), 1);
        buf.push(transition(2.0, false));
        assert_eq!(buf.len(), 2);
        buf.push(transition(3.0, false));
        assert_eq!(buf.len(), 2);
        let rewards: Vec<f64> = buf.iter().map(|t| t.reward).collect();
        assert_eq!(rewards, vec![2.0, 3.0]);
    }

    #[test]
    fn fill_to_capacity_without_overwrite() {
        let mut buf = ReplayBuffer::new(5);
        for i in 0..5 {
            buf.push(transition(i as f64, false));
        }
        assert_eq!(buf.len(), 5);
        let rewards: Vec<f64> = buf.iter().map(|t| t.reward).collect();
        assert_eq!(rewards, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn sample_with_replacement_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut buf = ReplayBuffer::new(4);
        assert_eq!(
            buf.sample(1, &mut rng).unwrap_err(),
            DdpgError::InsufficientData { have: 0, need: 1 }
        );
        buf.push(transition(7.0, false));
        // size 1 < n = 3 is an error: sampling waits for warmup
        assert!(buf.sample(3, &mut rng).is_err());
        assert_eq!(buf.len(), 1);
        let one = buf.sample(1, &mut rng).unwrap();
        assert_eq!(one[0].reward, 7.0);
    }

    #[test]
    fn sole_transition_repeats() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut buf = ReplayBuffer::new(1);
        buf.push(transition(7.0, false));
        for _ in 0..3 {
            assert_eq!(buf.sample(1, &mut rng).unwrap()[0].reward, 7.0);
        }
    }

    #[test]
    fn ou_fixed_point_and_decay() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = NoiseState { x: [0.3, 0.3] };
        for _ in 0..50 {
            let (x, n) = ou_step(s, 0.7, 0.0, 0.3, 0.05, &mut rng);
            assert_eq!(x, [0.3, 0.3]);
            s = n;
        }
        let (x, _) = ou_step(NoiseState { x: [1.0, 1.0] }, 1.0, 0.0, 0.0, 0.1, &mut rng);
        assert!((x[0] - 0.9).abs() < 1e-15 && (x[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn ou_random_walk_step_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let dt: f64 = 0.25;
        let n = 200_000;
        let mut sum = [0.0; 2];
        let mut sq = [0.0; 2];
        for _ in 0..n {
            let (x, _) = ou_step(NoiseState::default(), 0.0, 1.0, 0.0, dt, &mut rng);
            for k in 0..2 {
                sum[k] += x[k];
                sq[k] += x[k] * x[k];
            }
        }
        for k in 0..2 {
            let mean = sum[k] / n as f64;
            let var = sq[k] / n as f64 - mean * mean;
            // std error of the variance estimate is ~ dt*sqrt(2/n) ≈ 8e-4
            assert!((var - dt).abs() < 5e-3, "var {var}");
            assert!(mean.abs() < 5e-3);
        }
    }

    #[test]
    fn soft_update_limits() {
        let online = Mlp::init(&[2, 3, 1], OutputHead::Linear, 1).unwrap();
        let mut target = Mlp::init(&[2, 3, 1], OutputHead::Linear, 2).unwrap();
        let before = target.clone();
        soft_update(&mut target, &online, 0.0).unwrap();
        assert_eq!(target, before);
        soft_update(&mut target, &online, 1.0).unwrap();
        assert_eq!(target, online);
        let mut wrong = Mlp::init(&[2, 4, 1], OutputHead::Linear, 2).unwrap();
        assert!(soft_update(&mut wrong, &online, 0.5).is_err());
    }

    #[test]
    fn soft_update_twice_by_hand() {
        let online = Mlp::from_parts(&[1, 1], OutputHead::Linear, vec![1.0, 1.0]).unwrap();
        let mut target = Mlp::from_parts(&[1, 1], OutputHead::Linear, vec![0.0, 0.0]).unwrap();
        soft_update(&mut target, &online, 0.5).unwrap();
        soft_update(&mut target, &online, 0.5).unwrap();
        assert_eq!(target.params(), &[0.75, 0.75]);
    }

    #[test]
    fn zero_actor_without_noise_acts_zero() {
        let cfg = small_config();
        let mut agent = DdpgAgent::new(cfg, 2.0, 0).unwrap();
        agent.actor.params_mut().iter_mut().for_each(|p| *p = 0.0);
        assert_eq!(agent.act(&[0.4; OBS_DIM], false), Action::NONE);
    }

    #[test]
    fn actions_respect_bound_and_seed() {
        let mut a = DdpgAgent::new(small_config(), 2.0, 9).unwrap();
        let mut b = DdpgAgent::new(small_config(), 2.0, 9).unwrap();
        a.actor.params_mut().iter_mut().for_each(|p| *p *= 50.0);
        b.actor.params_mut().iter_mut().for_each(|p| *p *= 50.0);
        let obs = [0.7; OBS_DIM];
        for _ in 0..20 {
            let x = a.act(&obs, true);
            assert_eq!(x, b.act(&obs, true));
            assert!(x.force.norm() <= 2.0 + 1e-12);
            assert!(a.act(&obs, false).force.norm() <= 2.0 + 1e-12);
            b.act(&obs, false);
        }
    }

    #[test]
    fn terminal_and_undiscounted_targets_are_rewards() {
        let agent = DdpgAgent::new(small_config(), 2.0, 3).unwrap();
        let batch = [transition(1.5, true), transition(-0.25, true)];
        let refs: Vec<&Transition> = batch.iter().collect();
        assert_eq!(agent.targets(&refs).unwrap(), vec![1.5, -0.25]);

        let cfg = DdpgConfig {
            gamma: 0.0,
            ..small_config()
        };
        let agent = DdpgAgent::new(cfg, 2.0, 3).unwrap();
        let batch = [transition(1.5, false), transition(-0.25, false)];
        let refs: Vec<&Transition> = batch.iter().collect();
        assert_eq!(agent.targets(&refs).unwrap(), vec![1.5, -0.25]);
    }

    #[test]
    fn empty_batch_rejected() {
        let mut agent = DdpgAgent::new(small_config(), 2.0, 3).unwrap();
        assert_eq!(agent.update(&[]).unwrap_err(), DdpgError::EmptyBatch);
    }

    #[test]
    fn single_transition_critic_gradient_one_layer() {
        // critic = single affine layer 16 -> 1
        let critic = Mlp::init(&[CRITIC_INPUT_DIM, 1], OutputHead::Linear, 5).unwrap();
        let input: Vec<f64> = (0..CRITIC_INPUT_DIM).map(|i| (i as f64 * 0.37).sin()).collect();
        let target = [0.8];
        let (_, g) = critic_mse_grad(&critic, &input, &target).unwrap();
        let fd = finite_diff_grad(
            |p| {
                let c = Mlp::from_parts(critic.dims(), critic.head(), p.to_vec()).unwrap();
                let q = c.predict(&input).unwrap()[0];
                (q - target[0]).powi(2)
            },
            critic.params(),
            1e-5,
        );
        assert!(max_relative_error(&g.0, &fd, 1e-6) < 1e-4);
    }

    #[test]
    fn update_changes_online_and_tracks_targets() {
        let mut agent = DdpgAgent::new(small_config(), 2.0, 3).unwrap();
        let actor0 = agent.actor.clone();
        let critic0 = agent.critic.clone();
        let batch = [transition(0.1, false), transition(0.2, true)];
        let refs: Vec<&Transition> = batch.iter().collect();
        let stats = agent.update(&refs).unwrap();
        assert!(stats.critic_loss.is_finite() && stats.actor_loss.is_finite());
        assert_ne!(agent.actor, actor0);
        assert_ne!(agent.critic, critic0);
        assert_eq!(agent.actor_opt.t, 1);
        assert_eq!(agent.critic_opt.t, 1);
        assert_ne!(agent.actor_target, actor0);
    }

    #[test]
    fn config_validation() {
        assert!(DdpgConfig::default().validate().is_ok());
        let c = DdpgConfig {
            gamma: 1.0,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(DdpgError::InvalidConfig { field: "gamma", .. })));
        let c = DdpgConfig {
            tau: 0.0,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(DdpgError::InvalidConfig { field: "tau", .. })));
        let c = DdpgConfig {
            batch_size: 10,
            buffer_capacity: 5,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(DdpgError::InvalidConfig { field: "batch_size", .. })));
    }
}
