//! Small dense networks with explicit backpropagation and Adam.
//!
//! An [`Mlp`] stores all parameters in one flat `Vec<f64>`; layer `l` owns a
//! row-major `(dims[l+1] x dims[l])` weight block followed by a `dims[l+1]`
//! bias block. [`Grads`] and the Adam moment buffers share that layout, which
//! keeps the optimizer, Polyak averaging and checkpointing to plain slice
//! arithmetic.
//!
//! Hidden layers use `tanh`; the output head is either linear or a scaled
//! `tanh` bounded by `±bound`. Batched passes take row-major `batch x width`
//! matrices.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum NetError {
    #[error("invalid network dims {0:?}: need at least two layer sizes, all > 0")]
    InvalidDims(Vec<usize>),
    #[error("shape mismatch: expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("forward cache does not belong to this network state")]
    StaleCache,
    #[error("parameters contain non-finite values")]
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OutputHead {
    Linear,
    /// `bound * tanh(z)`.
    TanhScaled { bound: f64 },
}

static NEXT_STAMP: AtomicU64 = AtomicU64::new(1);

fn fresh_stamp() -> u64 {
    NEXT_STAMP.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug)]
pub struct Mlp {
    dims: Vec<usize>,
    head: OutputHead,
    params: Vec<f64>,
    // Identifies the exact parameter values a ForwardCache was produced from.
    stamp: u64,
}

impl Clone for Mlp {
    fn clone(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            head: self.head,
            params: self.params.clone(),
            stamp: fresh_stamp(),
        }
    }
}

impl PartialEq for Mlp {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.head == other.head && self.params == other.params
    }
}

/// Flat gradient vector with the same layout as [`Mlp::params`].
#[derive(Clone, Debug, PartialEq)]
pub struct Grads(pub Vec<f64>);

impl Grads {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Activations retained by a forward pass for the matching backward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    stamp: u64,
    batch: usize,
    /// Input to each layer (the network input, then each hidden activation).
    inputs: Vec<Vec<f64>>,
    /// Pre-activations of each layer.
    pre: Vec<Vec<f64>>,
    output: Vec<f64>,
}

impl ForwardCache {
    pub fn batch(&self) -> usize {
        self.batch
    }

    pub fn pre_activations(&self) -> &[Vec<f64>] {
        &self.pre
    }
}

pub fn param_count(dims: &[usize]) -> usize {
    dims.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
}

/// `tanh` through a single `exp`; roughly 3x cheaper than `f64::tanh` and
/// within one ulp of 1.0 (absolute) of it. Relative accuracy degrades for
/// |x| well below 1e-3, which is irrelevant for an activation.
#[inline]
pub fn fast_tanh(x: f64) -> f64 {
    let t = 1.0 - 2.0 / ((2.0 * x.abs()).exp() + 1.0);
    t.copysign(x)
}

fn check_dims(dims: &[usize]) -> Result<(), NetError> {
    if dims.len() < 2 || dims.contains(&0) {
        return Err(NetError::InvalidDims(dims.to_vec()));
    }
    Ok(())
}

fn check_len(expected: usize, got: usize) -> Result<(), NetError> {
    if expected != got {
        return Err(NetError::Shape { expected, got });
    }
    Ok(())
}

/// `C = A * B + beta * C` for strided operands; `C` is row-major `m x n`.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    (rsa, csa): (usize, usize),
    b: &[f64],
    (rsb, csb): (usize, usize),
    beta: f64,
    c: &mut [f64],
) {
    if m == 0 || n == 0 {
        return;
    }
    assert!(k == 0 || a.len() > (m - 1) * rsa + (k - 1) * csa);
    assert!(k == 0 || b.len() > (k - 1) * rsb + (n - 1) * csb);
    assert!(c.len() >= m * n);
    // SAFETY: the asserts above bound every index touched by the kernel, and
    // `c` is a unique borrow that cannot alias `a` or `b`.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            rsa as isize,
            csa as isize,
            b.as_ptr(),
            rsb as isize,
            csb as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

impl Mlp {
    /// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
    pub fn init(dims: &[usize], head: OutputHead, seed: u64) -> Result<Self, NetError> {
        check_dims(dims)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::with_capacity(param_count(dims));
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = 1.0 / (fan_in as f64).sqrt();
            params.extend((0..fan_in * fan_out).map(|_| rng.random_range(-limit..limit)));
            params.extend(std::iter::repeat_n(0.0, fan_out));
        }
        Ok(Self {
            dims: dims.to_vec(),
            head,
            params,
            stamp: fresh_stamp(),
        })
    }

    /// Rebuilds a network from its dims and flat parameters.
    pub fn from_parts(dims: &[usize], head: OutputHead, params: Vec<f64>) -> Result<Self, NetError> {
        check_dims(dims)?;
        check_len(param_count(dims), params.len())?;
        if params.iter().any(|p| !p.is_finite()) {
            return Err(NetError::NonFinite);
        }
        Ok(Self {
            dims: dims.to_vec(),
            head,
            params,
            stamp: fresh_stamp(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn head(&self) -> OutputHead {
        self.head
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().expect("dims validated non-empty")
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Mutable parameter access. Invalidates outstanding forward caches.
    pub fn params_mut(&mut self) -> &mut [f64] {
        self.stamp = fresh_stamp();
        &mut self.params
    }

    /// `(weight, bias)` slices of layer `l`.
    pub fn layer(&self, l: usize) -> (&[f64], &[f64]) {
        let (w, b) = self.layer_ranges(l);
        (&self.params[w], &self.params[b])
    }

    fn layer_ranges(&self, l: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        let offset = param_count(&self.dims[..=l]);
        let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
        let w = offset..offset + fan_in * fan_out;
        let b = w.end..w.end + fan_out;
        (w, b)
    }

    fn num_layers(&self) -> usize {
        self.dims.len() - 1
    }

    fn run(&self, input: &[f64], batch: usize, keep: bool) -> Result<(Vec<f64>, Option<ForwardCache>), NetError> {
        check_len(batch * self.input_dim(), input.len())?;
        let layers = self.num_layers();
        let mut inputs = Vec::with_capacity(if keep { layers } else { 0 });
        let mut pre = Vec::with_capacity(if keep { layers } else { 0 });
        let mut x = input.to_vec();
        for l in 0..layers {
            let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
            let (w, b) = self.layer(l);
            let mut z = Vec::with_capacity(batch * fan_out);
            for _ in 0..batch {
                z.extend_from_slice(b);
            }
            // Z = X * W^T + b
            gemm(batch, fan_in, fan_out, &x, (fan_in, 1), w, (1, fan_in), 1.0, &mut z);
            let is_last = l + 1 == layers;
            let act: Vec<f64> = match (is_last, self.head) {
                (false, _) => z.iter().map(|&v| fast_tanh(v)).collect(),
                (true, OutputHead::Linear) => z.clone(),
                (true, OutputHead::TanhScaled { bound }) => z.iter().map(|&v| bound * fast_tanh(v)).collect(),
            };
            if keep {
                inputs.push(std::mem::replace(&mut x, act));
                pre.push(z);
            } else {
                x = act;
            }
        }
        let cache = keep.then(|| ForwardCache {
            stamp: self.stamp,
            batch,
            inputs,
            pre,
            output: x.clone(),
        });
        Ok((x, cache))
    }

    /// Single-sample forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, ForwardCache), NetError> {
        self.forward_batch(input, 1)
    }

    pub fn forward_batch(&self, input: &[f64], batch: usize) -> Result<(Vec<f64>, ForwardCache), NetError> {
        let (out, cache) = self.run(input, batch, true)?;
        Ok((out, cache.expect("cache requested")))
    }

    /// Forward pass without retaining activations.
    pub fn predict_batch(&self, input: &[f64], batch: usize) -> Result<Vec<f64>, NetError> {
        Ok(self.run(input, batch, false)?.0)
    }

    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>, NetError> {
        self.predict_batch(input, 1)
    }

    /// Gradients of `sum(output .* grad_output)` with respect to every
    /// parameter and to the input.
    pub fn backward(&self, cache: &ForwardCache, grad_output: &[f64]) -> Result<(Grads, Vec<f64>), NetError> {
        let (grads, gin) = self.backprop(cache, grad_output, true)?;
        Ok((grads.expect("param grads requested"), gin))
    }

    /// Like [`Mlp::backward`] but only the input gradient; skips the weight
    /// products.
    pub fn input_gradient(&self, cache: &ForwardCache, grad_output: &[f64]) -> Result<Vec<f64>, NetError> {
        Ok(self.backprop(cache, grad_output, false)?.1)
    }

    fn backprop(
        &self,
        cache: &ForwardCache,
        grad_output: &[f64],
        want_params: bool,
    ) -> Result<(Option<Grads>, Vec<f64>), NetError> {
        if cache.stamp != self.stamp || cache.inputs.len() != self.num_layers() {
            return Err(NetError::StaleCache);
        }
        let batch = cache.batch;
        check_len(batch * self.output_dim(), grad_output.len())?;

        let layers = self.num_layers();
        let mut grads = want_params.then(|| vec![0.0; self.params.len()]);

        // dL/dz for the output layer
        let mut dz: Vec<f64> = match self.head {
            OutputHead::Linear => grad_output.to_vec(),
            OutputHead::TanhScaled { bound } => grad_output
                .iter()
                .zip(&cache.output)
                .map(|(g, y)| {
                    let t = y / bound;
                    g * bound * (1.0 - t * t)
                })
                .collect(),
        };

        for l in (0..layers).rev() {
            let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
            let x = &cache.inputs[l];
            let (w_range, b_range) = self.layer_ranges(l);
            if let Some(g) = grads.as_mut() {
                // dW = dZ^T * X
                gemm(fan_out, batch, fan_in, &dz, (1, fan_out), x, (fan_in, 1), 0.0, &mut g[w_range.clone()]);
                let db = &mut g[b_range];
                for row in dz.chunks_exact(fan_out) {
                    for (acc, v) in db.iter_mut().zip(row) {
                        *acc += v;
                    }
                }
            }
            // dX = dZ * W
            let mut dx = vec![0.0; batch * fan_in];
            gemm(batch, fan_out, fan_in, &dz, (fan_out, 1), &self.params[w_range], (fan_in, 1), 0.0, &mut dx);
            if l > 0 {
                // x is tanh(pre) of the layer below
                for (d, a) in dx.iter_mut().zip(x) {
                    *d *= 1.0 - a * a;
                }
            }
            dz = dx;
        }
        Ok((grads.map(Grads), dz))
    }

    /// One Adam update of all parameters.
    pub fn adam_step(&mut self, grads: &Grads, state: &mut AdamState) -> Result<(), NetError> {
        adam_step(self.params_mut(), grads, state)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub lr: f64,
}

impl AdamState {
    pub fn new(num_params: usize, lr: f64) -> Self {
        Self {
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            lr,
        }
    }
}

/// Adam with bias correction: `m̂ = m/(1-β1^t)`, `v̂ = v/(1-β2^t)`,
/// `θ -= lr * m̂ / (sqrt(v̂) + ε)`.
pub fn adam_step(params: &mut [f64], grads: &Grads, state: &mut AdamState) -> Result<(), NetError> {
    check_len(params.len(), grads.0.len())?;
    check_len(params.len(), state.m.len())?;
    check_len(params.len(), state.v.len())?;
    state.t += 1;
    let t = state.t as f64;
    let (b1, b2) = (state.beta1, state.beta2);
    let c1 = 1.0 - b1.powf(t);
    let c2 = 1.0 - b2.powf(t);
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(&grads.0)
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= state.lr * m_hat / (v_hat.sqrt() + state.eps);
    }
    Ok(())
}

/// Central-difference gradient of `f` at `params`.
pub fn finite_diff_grad(mut f: impl FnMut(&[f64]) -> f64, params: &[f64], eps: f64) -> Vec<f64> {
    let mut probe = params.to_vec();
    (0..params.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + eps;
            let up = f(&probe);
            probe[i] = orig - eps;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * eps)
        })
        .collect()
}

/// Largest elementwise relative error `|a-b| / max(|a|, |b|, floor)`.
pub fn max_relative_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}
