//! One-hidden-layer policy and value networks over flat parameter vectors,
//! with analytic gradients and a finite-difference verifier.
//!
//! The policy head is either categorical (softmax over logits) or diagonal
//! Gaussian (network mean, global per-dimension log-std). Sampled continuous
//! actions are returned unclipped together with their exact log density —
//! environments clamp at execution, so importance ratios stay consistent.

use crate::envs::Action;
use crate::error::{Error, Result};
use crate::frac_math::kahan_sum;
use crate::rng::Rng64;

/// Gradient aligned with the owning parameter vector.
pub type GradientVector = Vec<f64>;

const LOG_STD_MIN: f64 = -5.0;
const LOG_STD_MAX: f64 = 2.0;
const LN_2PI: f64 = 1.8378770664093453;

/// Output head of the policy network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionHead {
    /// Softmax over `n` discrete actions.
    Discrete { n: usize },
    /// Diagonal Gaussian with a global log-std per action dimension.
    Gaussian { dim: usize },
}

impl ActionHead {
    fn out_dim(self) -> usize {
        match self {
            ActionHead::Discrete { n } => n,
            ActionHead::Gaussian { dim } => dim,
        }
    }
}

/// Flat layout of one-hidden-layer parameters:
/// W1 (hidden×in, row-major), b1, W2 (out×hidden), b2, then log-std for
/// Gaussian heads.
#[derive(Debug, Clone, Copy)]
struct Layout {
    obs_dim: usize,
    hidden: usize,
    out: usize,
    log_std_dim: usize,
}

impl Layout {
    fn w1(&self) -> std::ops::Range<usize> {
        0..self.hidden * self.obs_dim
    }
    fn b1(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.obs_dim;
        s..s + self.hidden
    }
    fn w2(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.obs_dim + self.hidden;
        s..s + self.out * self.hidden
    }
    fn b2(&self) -> std::ops::Range<usize> {
        let s = self.hidden * self.obs_dim + self.hidden + self.out * self.hidden;
        s..s + self.out
    }
    fn log_std(&self) -> std::ops::Range<usize> {
        let s = self.b2().end;
        s..s + self.log_std_dim
    }
    fn len(&self) -> usize {
        self.log_std().end
    }

    /// h = tanh(W1·obs + b1), out = W2·h + b2.
    fn forward(&self, params: &[f64], obs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let w1 = &params[self.w1()];
        let b1 = &params[self.b1()];
        let w2 = &params[self.w2()];
        let b2 = &params[self.b2()];
        let mut h = Vec::with_capacity(self.hidden);
        for j in 0..self.hidden {
            let row = &w1[j * self.obs_dim..(j + 1) * self.obs_dim];
            let mut acc = b1[j];
            for (w, x) in row.iter().zip(obs) {
                acc += w * x;
            }
            h.push(acc.tanh());
        }
        let mut out = Vec::with_capacity(self.out);
        for i in 0..self.out {
            let row = &w2[i * self.hidden..(i + 1) * self.hidden];
            let mut acc = b2[i];
            for (w, hj) in row.iter().zip(&h) {
                acc += w * hj;
            }
            out.push(acc);
        }
        (h, out)
    }

    /// Backpropagate d(objective)/d(out) = `g_out` into a full-length
    /// parameter gradient. `g_log_std` fills the trailing log-std slots.
    fn backward(
        &self,
        params: &[f64],
        obs: &[f64],
        h: &[f64],
        g_out: &[f64],
        g_log_std: &[f64],
    ) -> GradientVector {
        let w2 = &params[self.w2()];
        let mut grad = vec![0.0; self.len()];
        {
            let (gw2_start, gb2_start) = (self.w2().start, self.b2().start);
            for i in 0..self.out {
                let gi = g_out[i];
                for j in 0..self.hidden {
                    grad[gw2_start + i * self.hidden + j] = gi * h[j];
                }
                grad[gb2_start + i] = gi;
            }
        }
        let mut g_pre = vec![0.0; self.hidden];
        for j in 0..self.hidden {
            let mut acc = 0.0;
            for i in 0..self.out {
                acc += g_out[i] * w2[i * self.hidden + j];
            }
            g_pre[j] = acc * (1.0 - h[j] * h[j]);
        }
        {
            let (gw1_start, gb1_start) = (self.w1().start, self.b1().start);
            for j in 0..self.hidden {
                let gj = g_pre[j];
                for (k, &x) in obs.iter().enumerate() {
                    grad[gw1_start + j * self.obs_dim + k] = gj * x;
                }
                grad[gb1_start + j] = gj;
            }
        }
        let ls = self.log_std();
        grad[ls].copy_from_slice(g_log_std);
        grad
    }
}

fn init_params(layout: &Layout, rng: &mut Rng64, final_scale: f64) -> Vec<f64> {
    let mut p = vec![0.0; layout.len()];
    let bound1 = 1.0 / (layout.obs_dim as f64).sqrt();
    for i in layout.w1() {
        p[i] = rng.uniform_in(-bound1, bound1);
    }
    for i in layout.b1() {
        p[i] = rng.uniform_in(-bound1, bound1);
    }
    let bound2 = 1.0 / (layout.hidden as f64).sqrt();
    for i in layout.w2() {
        p[i] = rng.uniform_in(-bound2, bound2) * final_scale;
    }
    for i in layout.b2() {
        p[i] = rng.uniform_in(-bound2, bound2) * final_scale;
    }
    // log-std entries start at 0 (unit standard deviation).
    p
}

/// Policy network π_θ.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNet {
    pub obs_dim: usize,
    pub hidden: usize,
    pub head: ActionHead,
    pub params: Vec<f64>,
}

impl PolicyNet {
    /// Random initialization: uniform(±1/√fan_in) weights and biases, with
    /// the output layer scaled by 0.01 so the initial policy is near-uniform.
    pub fn new(obs_dim: usize, hidden: usize, head: ActionHead, rng: &mut Rng64) -> Self {
        let layout = Self::layout_for(obs_dim, hidden, head);
        PolicyNet { obs_dim, hidden, head, params: init_params(&layout, rng, 0.01) }
    }

    /// All-zero parameters (uniform policy); used by tests and docs.
    pub fn zeroed(obs_dim: usize, hidden: usize, head: ActionHead) -> Self {
        let layout = Self::layout_for(obs_dim, hidden, head);
        PolicyNet { obs_dim, hidden, head, params: vec![0.0; layout.len()] }
    }

    fn layout_for(obs_dim: usize, hidden: usize, head: ActionHead) -> Layout {
        let log_std_dim = match head {
            ActionHead::Discrete { .. } => 0,
            ActionHead::Gaussian { dim } => dim,
        };
        Layout { obs_dim, hidden, out: head.out_dim(), log_std_dim }
    }

    fn layout(&self) -> Layout {
        Self::layout_for(self.obs_dim, self.hidden, self.head)
    }

    pub fn param_count(&self) -> usize {
        self.layout().len()
    }

    fn check_obs(&self, obs: &[f64]) -> Result<()> {
        if obs.len() != self.obs_dim {
            return Err(Error::Dimension(format!(
                "observation has {} components, policy expects {}",
                obs.len(),
                self.obs_dim
            )));
        }
        Ok(())
    }

    /// Clamp the log-std entries into [−5, 2]. Call after every parameter
    /// update; densities and gradients always use the stored values directly.
    pub fn project_params(&mut self) {
        if matches!(self.head, ActionHead::Gaussian { .. }) {
            let r = self.layout().log_std();
            for v in &mut self.params[r] {
                *v = v.clamp(LOG_STD_MIN, LOG_STD_MAX);
            }
        }
    }

    pub fn params_finite(&self) -> bool {
        self.params.iter().all(|v| v.is_finite())
    }

    /// Softmax action probabilities (discrete heads only).
    pub fn action_probs(&self, obs: &[f64]) -> Result<Vec<f64>> {
        self.check_obs(obs)?;
        match self.head {
            ActionHead::Discrete { .. } => {
                let (_, logits) = self.layout().forward(&self.params, obs);
                Ok(softmax(&logits))
            }
            ActionHead::Gaussian { .. } => Err(Error::Domain(
                "action_probs is only defined for discrete heads".into(),
            )),
        }
    }

    /// Draw an action and return it with its exact log probability.
    /// Continuous samples are NOT clipped here; environments clamp on
    /// execution, and the density refers to the returned value.
    pub fn sample(&self, obs: &[f64], rng: &mut Rng64) -> Result<(Action, f64)> {
        self.check_obs(obs)?;
        let layout = self.layout();
        let (_, out) = layout.forward(&self.params, obs);
        let action = match self.head {
            ActionHead::Discrete { n } => {
                let probs = softmax(&out);
                let u = rng.uniform();
                let mut cum = 0.0;
                let mut pick = n - 1;
                for (i, p) in probs.iter().enumerate() {
                    cum += p;
                    if u < cum {
                        pick = i;
                        break;
                    }
                }
                Action::Discrete(pick)
            }
            ActionHead::Gaussian { dim } => {
                let log_std = &self.params[layout.log_std()];
                let mut a = Vec::with_capacity(dim);
                for i in 0..dim {
                    let std = log_std[i].exp();
                    a.push(out[i] + std * rng.normal());
                }
                Action::Continuous(a)
            }
        };
        let lp = self.log_prob_from_out(&layout, &out, &action)?;
        Ok((action, lp))
    }

    /// Exact log density/mass of `action` under the current parameters.
    pub fn log_prob(&self, obs: &[f64], action: &Action) -> Result<f64> {
        self.check_obs(obs)?;
        let layout = self.layout();
        let (_, out) = layout.forward(&self.params, obs);
        self.log_prob_from_out(&layout, &out, action)
    }

    /// Log density given precomputed network outputs. `sample` reports its
    /// density through this same path, so re-evaluating `log_prob` on an
    /// unchanged network reproduces the sampled value bit for bit (and
    /// importance ratios come out exactly 1).
    fn log_prob_from_out(&self, layout: &Layout, out: &[f64], action: &Action) -> Result<f64> {
        match (self.head, action) {
            (ActionHead::Discrete { n }, Action::Discrete(a)) => {
                if *a >= n {
                    return Err(Error::Dimension(format!("action {a} out of range 0..{n}")));
                }
                Ok(log_softmax(out)[*a])
            }
            (ActionHead::Gaussian { dim }, Action::Continuous(a)) => {
                if a.len() != dim {
                    return Err(Error::Dimension(format!(
                        "action has {} components, head expects {dim}",
                        a.len()
                    )));
                }
                let log_std = &self.params[layout.log_std()];
                let mut lp = 0.0;
                for i in 0..dim {
                    let inv_var = (-2.0 * log_std[i]).exp();
                    let d = a[i] - out[i];
                    lp += -0.5 * LN_2PI - log_std[i] - 0.5 * d * d * inv_var;
                }
                Ok(lp)
            }
            _ => Err(Error::Dimension("action kind does not match policy head".into())),
        }
    }

    /// Analytic ∇_θ log π_θ(action | obs).
    pub fn score(&self, obs: &[f64], action: &Action) -> Result<GradientVector> {
        self.check_obs(obs)?;
        let layout = self.layout();
        let (h, out) = layout.forward(&self.params, obs);
        match (self.head, action) {
            (ActionHead::Discrete { n }, Action::Discrete(a)) => {
                if *a >= n {
                    return Err(Error::Dimension(format!("action {a} out of range 0..{n}")));
                }
                let probs = softmax(&out);
                let g_out: Vec<f64> = (0..n)
                    .map(|i| if i == *a { 1.0 - probs[i] } else { -probs[i] })
                    .collect();
                Ok(layout.backward(&self.params, obs, &h, &g_out, &[]))
            }
            (ActionHead::Gaussian { dim }, Action::Continuous(a)) => {
                if a.len() != dim {
                    return Err(Error::Dimension(format!(
                        "action has {} components, head expects {dim}",
                        a.len()
                    )));
                }
                let log_std = &self.params[layout.log_std()];
                let mut g_out = Vec::with_capacity(dim);
                let mut g_ls = Vec::with_capacity(dim);
                for i in 0..dim {
                    let inv_var = (-2.0 * log_std[i]).exp();
                    let d = a[i] - out[i];
                    g_out.push(d * inv_var);
                    g_ls.push(d * d * inv_var - 1.0);
                }
                Ok(layout.backward(&self.params, obs, &h, &g_out, &g_ls))
            }
            _ => Err(Error::Dimension("action kind does not match policy head".into())),
        }
    }
}

impl PolicyNet {
    /// Serialize as a flat CSV vector with an architecture header line.
    /// f64 values use the shortest round-trip form, so parsing restores the
    /// parameters bit-for-bit.
    pub fn to_checkpoint(&self) -> String {
        let head = match self.head {
            ActionHead::Discrete { n } => format!("discrete:{n}"),
            ActionHead::Gaussian { dim } => format!("gaussian:{dim}"),
        };
        let mut s = format!("policy,obs_dim={},hidden={},head={}\n", self.obs_dim, self.hidden, head);
        for v in &self.params {
            s.push_str(&format!("{v}\n"));
        }
        s
    }

    pub fn from_checkpoint(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Config("empty checkpoint".into()))?;
        let fields = parse_checkpoint_header(header, "policy")?;
        let obs_dim = checkpoint_field(&fields, "obs_dim")?.parse::<usize>().map_err(bad_header)?;
        let hidden = checkpoint_field(&fields, "hidden")?.parse::<usize>().map_err(bad_header)?;
        let head_desc = checkpoint_field(&fields, "head")?;
        let head = match head_desc.split_once(':') {
            Some(("discrete", n)) => ActionHead::Discrete { n: n.parse().map_err(bad_header)? },
            Some(("gaussian", d)) => ActionHead::Gaussian { dim: d.parse().map_err(bad_header)? },
            _ => return Err(Error::Config(format!("bad head descriptor '{head_desc}'"))),
        };
        let params = parse_checkpoint_values(lines)?;
        let expected = Self::layout_for(obs_dim, hidden, head).len();
        if params.len() != expected {
            return Err(Error::Config(format!(
                "checkpoint has {} values, architecture needs {expected}",
                params.len()
            )));
        }
        Ok(PolicyNet { obs_dim, hidden, head, params })
    }
}

fn parse_checkpoint_header<'a>(header: &'a str, kind: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let mut parts = header.split(',');
    match parts.next() {
        Some(k) if k == kind => {}
        other => {
            return Err(Error::Config(format!(
                "checkpoint kind mismatch: expected '{kind}', got '{}'",
                other.unwrap_or("")
            )))
        }
    }
    parts
        .map(|kv| {
            kv.split_once('=')
                .ok_or_else(|| Error::Config(format!("bad checkpoint header field '{kv}'")))
        })
        .collect()
}

fn checkpoint_field<'a>(fields: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Config(format!("checkpoint header missing '{key}'")))
}

fn bad_header<E: std::fmt::Display>(e: E) -> Error {
    Error::Config(format!("bad checkpoint header value: {e}"))
}

fn parse_checkpoint_values<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Vec<f64>> {
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad checkpoint value '{l}': {e}")))
        })
        .collect()
}

/// Value network V_φ with a scalar output.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueNet {
    pub obs_dim: usize,
    pub hidden: usize,
    pub params: Vec<f64>,
}

impl ValueNet {
    pub fn new(obs_dim: usize, hidden: usize, rng: &mut Rng64) -> Self {
        let layout = Layout { obs_dim, hidden, out: 1, log_std_dim: 0 };
        ValueNet { obs_dim, hidden, params: init_params(&layout, rng, 1.0) }
    }

    pub fn zeroed(obs_dim: usize, hidden: usize) -> Self {
        let layout = Layout { obs_dim, hidden, out: 1, log_std_dim: 0 };
        ValueNet { obs_dim, hidden, params: vec![0.0; layout.len()] }
    }

    fn layout(&self) -> Layout {
        Layout { obs_dim: self.obs_dim, hidden: self.hidden, out: 1, log_std_dim: 0 }
    }

    pub fn param_count(&self) -> usize {
        self.layout().len()
    }

    fn check_obs(&self, obs: &[f64]) -> Result<()> {
        if obs.len() != self.obs_dim {
            return Err(Error::Dimension(format!(
                "observation has {} components, value net expects {}",
                obs.len(),
                self.obs_dim
            )));
        }
        Ok(())
    }

    pub fn params_finite(&self) -> bool {
        self.params.iter().all(|v| v.is_finite())
    }

    pub fn value(&self, obs: &[f64]) -> Result<f64> {
        self.check_obs(obs)?;
        let (_, out) = self.layout().forward(&self.params, obs);
        Ok(out[0])
    }

    /// Analytic ∇_φ V_φ(obs).
    pub fn value_grad(&self, obs: &[f64]) -> Result<GradientVector> {
        self.check_obs(obs)?;
        let layout = self.layout();
        let (h, _) = layout.forward(&self.params, obs);
        Ok(layout.backward(&self.params, obs, &h, &[1.0], &[]))
    }
}

impl ValueNet {
    /// Serialize as a flat CSV vector with an architecture header line.
    pub fn to_checkpoint(&self) -> String {
        let mut s = format!("value,obs_dim={},hidden={}\n", self.obs_dim, self.hidden);
        for v in &self.params {
            s.push_str(&format!("{v}\n"));
        }
        s
    }

    pub fn from_checkpoint(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Config("empty checkpoint".into()))?;
        let fields = parse_checkpoint_header(header, "value")?;
        let obs_dim = checkpoint_field(&fields, "obs_dim")?.parse::<usize>().map_err(bad_header)?;
        let hidden = checkpoint_field(&fields, "hidden")?.parse::<usize>().map_err(bad_header)?;
        let params = parse_checkpoint_values(lines)?;
        let expected = Layout { obs_dim, hidden, out: 1, log_std_dim: 0 }.len();
        if params.len() != expected {
            return Err(Error::Config(format!(
                "checkpoint has {} values, architecture needs {expected}",
                params.len()
            )));
        }
        Ok(ValueNet { obs_dim, hidden, params })
    }
}

/// Euclidean norm with compensated summation of squares.
pub fn grad_norm(g: &[f64]) -> f64 {
    kahan_sum(g.iter().map(|&v| v * v)).sqrt()
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let exps: Vec<f64> = logits.iter().map(|&z| (z - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}

fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let log_sum = logits.iter().map(|&z| (z - m).exp()).sum::<f64>().ln() + m;
    logits.iter().map(|&z| z - log_sum).collect()
}

/// Compare an analytic gradient against central finite differences of `f`.
///
/// Components whose analytic and numeric magnitudes are both below
/// `abs_floor` are skipped. The central difference itself carries rounding
/// noise of order |f|·ε/(2h); that floor is discounted before forming the
/// relative error, so tiny-but-included components are not failed on the
/// oracle's own imprecision. Returns the worst relative error observed.
pub fn finite_diff_max_rel_err<F: FnMut(&[f64]) -> f64>(
    params: &[f64],
    analytic: &[f64],
    mut f: F,
    h: f64,
    abs_floor: f64,
) -> f64 {
    assert_eq!(params.len(), analytic.len());
    let mut work = params.to_vec();
    let mut worst = 0.0f64;
    for i in 0..params.len() {
        let orig = work[i];
        work[i] = orig + h;
        let up = f(&work);
        work[i] = orig - h;
        let down = f(&work);
        work[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        if numeric.abs() < abs_floor && analytic[i].abs() < abs_floor {
            continue;
        }
        let noise = up.abs().max(down.abs()) * f64::EPSILON / (2.0 * h) * 10.0;
        let scale = numeric.abs().max(analytic[i].abs());
        let excess = ((numeric - analytic[i]).abs() - noise).max(0.0);
        worst = worst.max(excess / scale);
    }
    worst
}
