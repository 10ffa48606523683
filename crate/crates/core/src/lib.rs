//! Two-versus-one sumo in a circular ring, with a DDPG-trained teammate.
//!
//! - [`arena`]: planar disc physics, ring-out outcomes, observations
//! - [`rewards`]: shaped and terminal learner reward
//! - [`tinynet`]: MLP with hand-written backprop and Adam
//! - [`ddpg`]: replay buffer, exploration noise, actor-critic updates
//! - [`opponents`]: scripted partner/opponent policies
//! - [`harness`]: configs, training loop, evaluation, checkpoints, metrics, plots

pub mod arena;
pub mod ddpg;
pub mod opponents;
pub mod rewards;
pub mod tinynet;
pub mod harness;
