//! End-to-end training: online actor-critic updates driven by the fractional
//! TD error, an episode replay buffer with importance-weighted minibatch
//! updates, and three baseline algorithms for comparison.
//!
//! One training run is strictly sequential and fully determined by
//! (config, seed): every random draw — network init, episode seeds, action
//! sampling, minibatch selection — flows from a single generator.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::bench::stats::population_variance;
use crate::bench::MetricsRecord;
use crate::envs::{Action, ActionSpace, Env, EnvKind};
use crate::error::{Error, Result};
use crate::frac_math::{check_alpha, KahanSum};
use crate::frac_td::{
    identity_step, recursive_step, td_error, EtaVariant, FracTdConfig, FracTdState, MuVariant,
};
use crate::policy::{grad_norm, ActionHead, PolicyNet, ValueNet};
use crate::rng::Rng64;

/// Training algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    /// Fractional policy gradient: the main algorithm.
    Fpg,
    /// Monte Carlo returns × score, one update per episode, no critic.
    Reinforce,
    /// Same loop as `Fpg` with the plain TD error in place of the
    /// fractional one and no fractional state.
    A2c,
    /// Clipped-surrogate minibatch epochs on per-episode advantages.
    PpoLite,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Fpg, Algo::Reinforce, Algo::A2c, Algo::PpoLite];

    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Fpg => "fpg",
            Algo::Reinforce => "reinforce",
            Algo::A2c => "a2c",
            Algo::PpoLite => "ppo_lite",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fpg" => Ok(Algo::Fpg),
            "reinforce" => Ok(Algo::Reinforce),
            "a2c" => Ok(Algo::A2c),
            "ppo_lite" => Ok(Algo::PpoLite),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected fpg, reinforce, a2c, or ppo_lite)"
            ))),
        }
    }
}

/// Ablation switches for the main algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Ablations {
    /// Disable the adaptive clip on the fractional TD error.
    pub clipping_off: bool,
    /// Replace the fractional recursion with the plain TD error
    /// (state bookkeeping and optional clipping remain).
    pub recursion_off: bool,
    /// Skip the episode-end minibatch update (online-only).
    pub minibatch_off: bool,
}

/// Full specification of one training run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub env: EnvKind,
    pub algo: Algo,
    pub seed: u64,
    /// Fractional order; used by `Fpg` only.
    pub alpha: f64,
    pub gamma: f64,
    pub beta_theta: f64,
    pub beta_v: f64,
    pub eps_tol: f64,
    pub eps_clip: f64,
    /// M: number of episodes.
    pub max_episodes: usize,
    /// T: per-episode step cap; 0 means the environment's own limit.
    pub horizon: usize,
    /// B: minibatch size (capped at the buffer length when sampling).
    pub minibatch: usize,
    pub hidden: usize,
    pub mu_variant: MuVariant,
    pub eta_variant: EtaVariant,
    pub ablations: Ablations,
}

impl TrainConfig {
    /// Standard hyperparameters for an (environment, algorithm) pair.
    pub fn defaults_for(env: EnvKind, algo: Algo, seed: u64) -> Self {
        let (alpha, gamma) = match env {
            EnvKind::CartPole => (0.65, 0.99),
            EnvKind::MountainCar => (0.75, 0.99),
            EnvKind::Pendulum => (0.70, 0.95),
        };
        TrainConfig {
            env,
            algo,
            seed,
            alpha,
            gamma,
            beta_theta: 3e-3,
            beta_v: 1e-2,
            eps_tol: 1e-8,
            eps_clip: 0.2,
            max_episodes: 2000,
            horizon: 0,
            minibatch: 64,
            hidden: 64,
            mu_variant: MuVariant::PowerRatio,
            eta_variant: EtaVariant::InverseGamma,
            ablations: Ablations::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Config(format!("gamma must be in (0, 1], got {}", self.gamma)));
        }
        if self.eps_clip <= 0.0 {
            return Err(Error::Config(format!("eps_clip must be > 0, got {}", self.eps_clip)));
        }
        if self.eps_tol <= 0.0 {
            return Err(Error::Config(format!("eps_tol must be > 0, got {}", self.eps_tol)));
        }
        if self.minibatch == 0 {
            return Err(Error::Config("minibatch size must be >= 1".into()));
        }
        if self.hidden == 0 {
            return Err(Error::Config("hidden width must be >= 1".into()));
        }
        if !(self.beta_theta >= 0.0 && self.beta_v >= 0.0) {
            return Err(Error::Config("learning rates must be >= 0".into()));
        }
        if self.algo == Algo::Fpg {
            check_alpha(self.alpha)?;
        }
        Ok(())
    }

    /// Build the fractional-TD configuration implied by this run config.
    pub fn frac_config(&self) -> Result<FracTdConfig> {
        let mut cfg = FracTdConfig::with_variants(self.alpha, self.mu_variant, self.eta_variant)?;
        cfg.eps_tol = self.eps_tol;
        cfg.clipping_enabled = !self.ablations.clipping_off;
        Ok(cfg)
    }
}

/// Canonical (section, key, value) listing of every config field, in a fixed
/// order. This single source of truth feeds CSV header comments, run
/// manifests, and config files; `apply_config_kv` is its inverse.
pub fn config_kv(config: &TrainConfig) -> Vec<(&'static str, &'static str, String)> {
    vec![
        ("train", "env", config.env.as_str().to_string()),
        ("train", "algo", config.algo.as_str().to_string()),
        ("train", "seed", config.seed.to_string()),
        ("train", "alpha", config.alpha.to_string()),
        ("train", "gamma", config.gamma.to_string()),
        ("train", "beta_theta", config.beta_theta.to_string()),
        ("train", "beta_v", config.beta_v.to_string()),
        ("train", "eps_tol", config.eps_tol.to_string()),
        ("train", "eps_clip", config.eps_clip.to_string()),
        ("train", "max_episodes", config.max_episodes.to_string()),
        ("train", "horizon", config.horizon.to_string()),
        ("train", "minibatch", config.minibatch.to_string()),
        ("train", "hidden", config.hidden.to_string()),
        ("frac", "mu_variant", config.mu_variant.as_str().to_string()),
        ("frac", "eta_variant", config.eta_variant.as_str().to_string()),
        ("ablations", "clipping_off", config.ablations.clipping_off.to_string()),
        ("ablations", "recursion_off", config.ablations.recursion_off.to_string()),
        ("ablations", "minibatch_off", config.ablations.minibatch_off.to_string()),
    ]
}

/// Set one configuration field from its textual (section, key, value) form.
/// Unknown sections or keys are errors, as are unparseable values.
pub fn apply_config_kv(
    config: &mut TrainConfig,
    section: &str,
    key: &str,
    value: &str,
) -> Result<()> {
    fn num<T: FromStr>(key: &str, value: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        value
            .parse()
            .map_err(|e| Error::Config(format!("invalid value '{value}' for {key}: {e}")))
    }
    match (section, key) {
        ("train", "env") => config.env = value.parse()?,
        ("train", "algo") => config.algo = value.parse()?,
        ("train", "seed") => config.seed = num(key, value)?,
        ("train", "alpha") => config.alpha = num(key, value)?,
        ("train", "gamma") => config.gamma = num(key, value)?,
        ("train", "beta_theta") => config.beta_theta = num(key, value)?,
        ("train", "beta_v") => config.beta_v = num(key, value)?,
        ("train", "eps_tol") => config.eps_tol = num(key, value)?,
        ("train", "eps_clip") => config.eps_clip = num(key, value)?,
        ("train", "max_episodes") => config.max_episodes = num(key, value)?,
        ("train", "horizon") => config.horizon = num(key, value)?,
        ("train", "minibatch") => config.minibatch = num(key, value)?,
        ("train", "hidden") => config.hidden = num(key, value)?,
        ("frac", "mu_variant") => config.mu_variant = value.parse()?,
        ("frac", "eta_variant") => config.eta_variant = value.parse()?,
        ("ablations", "clipping_off") => config.ablations.clipping_off = num(key, value)?,
        ("ablations", "recursion_off") => config.ablations.recursion_off = num(key, value)?,
        ("ablations", "minibatch_off") => config.ablations.minibatch_off = num(key, value)?,
        _ => {
            return Err(Error::Config(format!("unknown config key '{key}' in section [{section}]")))
        }
    }
    Ok(())
}

/// One stored transition. `old_log_prob` is the density of `action` under
/// the parameters in effect when it was sampled; `frac_delta` is the scalar
/// weight recorded at collection time.
#[derive(Debug, Clone)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: Action,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub old_log_prob: f64,
    pub frac_delta: f64,
    pub done: bool,
}

/// Running sums of squared gradient norms behind the adaptive step sizes
/// β̃ = β/√(1+Σ‖·‖²). The sums are compensated and never reset, so the
/// effective learning rates are nonincreasing over a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdaptiveLrState {
    sum_sq_rho: KahanSum,
    sum_sq_nu: KahanSum,
}

impl AdaptiveLrState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn observe_policy_norm(&mut self, rho: f64) {
        self.sum_sq_rho.add(rho * rho);
    }

    pub fn observe_value_norm(&mut self, nu: f64) {
        self.sum_sq_nu.add(nu * nu);
    }

    pub fn lr_theta(&self, beta: f64) -> f64 {
        beta / (1.0 + self.sum_sq_rho.value()).sqrt()
    }

    pub fn lr_v(&self, beta: f64) -> f64 {
        beta / (1.0 + self.sum_sq_nu.value()).sqrt()
    }

    pub fn sums(&self) -> (f64, f64) {
        (self.sum_sq_rho.value(), self.sum_sq_nu.value())
    }
}

/// Clipped importance weight min(π_now/π_old, 1+ε) from stored log densities.
pub fn importance_weight(log_prob_now: f64, old_log_prob: f64, eps_clip: f64) -> f64 {
    (log_prob_now - old_log_prob).exp().min(1.0 + eps_clip)
}

/// Discounted returns-to-go; `bootstrap` seeds the value beyond the last
/// reward (0 for terminated episodes, V(s_T) for truncated ones).
pub fn returns_to_go(rewards: &[f64], gamma: f64, bootstrap: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = bootstrap;
    for i in (0..rewards.len()).rev() {
        acc = rewards[i] + gamma * acc;
        out[i] = acc;
    }
    out
}

/// Scalar factor multiplying the score in the gradient of the two-sided
/// clipped surrogate min(r·A, clip(r, 1−ε, 1+ε)·A): zero where the clip is
/// active against the objective, r·A elsewhere.
fn ppo_grad_factor(ratio: f64, advantage: f64, eps_clip: f64) -> f64 {
    let clipped_out = (advantage >= 0.0 && ratio > 1.0 + eps_clip)
        || (advantage < 0.0 && ratio < 1.0 - eps_clip);
    if clipped_out {
        0.0
    } else {
        ratio * advantage
    }
}

/// Completed training run: per-episode metrics plus final parameters.
/// On a numerical abort the parameters roll back to the last episode
/// boundary where everything was still finite.
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub config: TrainConfig,
    pub metrics: Vec<MetricsRecord>,
    pub policy: PolicyNet,
    pub value: ValueNet,
    /// Diagnostic message if the run aborted on non-finite values.
    pub abort: Option<String>,
    /// Largest observed |fractional TD error| − clip bound across all steps
    /// with clipping active; −∞ when clipping never ran. Enforcement makes
    /// this ≤ 0 on every healthy run.
    pub max_clip_bound_excess: f64,
}

fn axpy(dst: &mut [f64], a: f64, x: &[f64]) {
    for (d, &v) in dst.iter_mut().zip(x) {
        *d += a * v;
    }
}

fn check_finite(policy: &PolicyNet, value: &ValueNet, context: &str) -> Result<()> {
    if !policy.params_finite() {
        return Err(Error::NumericalAbort(format!("policy parameters non-finite after {context}")));
    }
    if !value.params_finite() {
        return Err(Error::NumericalAbort(format!("value parameters non-finite after {context}")));
    }
    Ok(())
}

/// How the per-step scalar weight is produced in the actor-critic loop.
#[derive(Clone, Copy, PartialEq)]
enum DeltaMode {
    /// Fractional recursion (with clipping per config).
    Recursive,
    /// Recursion disabled: plain TD error through the same bookkeeping.
    Identity,
    /// Plain TD error, no fractional state at all (the A2C baseline).
    Plain,
}

struct EpisodeOutcome {
    steps: usize,
    ret: f64,
    step_grad_norms: Vec<f64>,
    max_abs_frac_delta: f64,
    clip_events: u64,
    max_bound_excess: f64,
}

/// Run a full training session. Deterministic in (config, seed); aborts
/// (with last-good parameters) if any update produces non-finite values.
pub fn train(config: &TrainConfig) -> Result<TrainRun> {
    config.validate()?;
    let mut rng = Rng64::new(config.seed);
    let mut env = Env::new(config.env);
    let spec = env.spec();
    let head = match spec.action_space {
        ActionSpace::Discrete(n) => ActionHead::Discrete { n },
        ActionSpace::Box { dim, .. } => ActionHead::Gaussian { dim },
    };
    let mut policy = PolicyNet::new(spec.obs_dim, config.hidden, head, &mut rng);
    let mut value = ValueNet::new(spec.obs_dim, config.hidden, &mut rng);
    let frac_cfg = if config.algo == Algo::Fpg { Some(config.frac_config()?) } else { None };
    let mut lr = AdaptiveLrState::new();
    let step_limit = if config.horizon == 0 { spec.max_steps } else { config.horizon };

    let mut metrics = Vec::with_capacity(config.max_episodes);
    let mut ep_grad_vars: Vec<f64> = Vec::with_capacity(config.max_episodes);
    let mut max_excess = f64::NEG_INFINITY;

    for episode in 1..=config.max_episodes {
        let snapshot = (policy.clone(), value.clone());
        let started = Instant::now();
        let outcome = run_episode(
            &mut env,
            &mut policy,
            &mut value,
            &mut lr,
            frac_cfg.as_ref(),
            config,
            step_limit,
            &mut rng,
        );
        match outcome {
            Ok(ep) => {
                max_excess = max_excess.max(ep.max_bound_excess);
                ep_grad_vars.push(population_variance(&ep.step_grad_norms));
                let w0 = ep_grad_vars.len().saturating_sub(20);
                let window = &ep_grad_vars[w0..];
                let grad_var_window = window.iter().sum::<f64>() / window.len() as f64;
                metrics.push(MetricsRecord {
                    episode,
                    steps: ep.steps,
                    ret: ep.ret,
                    grad_var_window,
                    max_abs_frac_delta: ep.max_abs_frac_delta,
                    clip_events: ep.clip_events,
                    wall_ms: started.elapsed().as_secs_f64() * 1e3,
                });
            }
            Err(Error::NumericalAbort(diag)) | Err(Error::NonFinite(diag)) => {
                let (p, v) = snapshot;
                return Ok(TrainRun {
                    config: *config,
                    metrics,
                    policy: p,
                    value: v,
                    abort: Some(format!("episode {episode}: {diag}")),
                    max_clip_bound_excess: max_excess,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TrainRun {
        config: *config,
        metrics,
        policy,
        value,
        abort: None,
        max_clip_bound_excess: max_excess,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_episode(
    env: &mut Env,
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    lr: &mut AdaptiveLrState,
    frac_cfg: Option<&FracTdConfig>,
    config: &TrainConfig,
    step_limit: usize,
    rng: &mut Rng64,
) -> Result<EpisodeOutcome> {
    let ep_seed = rng.next_u64();
    let obs = env.reset(ep_seed);
    match config.algo {
        Algo::Fpg | Algo::A2c => {
            let mode = match (config.algo, config.ablations.recursion_off) {
                (Algo::A2c, _) => DeltaMode::Plain,
                (_, true) => DeltaMode::Identity,
                (_, false) => DeltaMode::Recursive,
            };
            actor_critic_episode(env, policy, value, lr, frac_cfg, config, step_limit, rng, obs, mode)
        }
        Algo::Reinforce => reinforce_episode(env, policy, lr, config, step_limit, rng, obs),
        Algo::PpoLite => ppo_lite_episode(env, policy, value, lr, config, step_limit, rng, obs),
    }
}

/// Online actor-critic loop (main algorithm and the A2C baseline): per-step
/// policy and value updates scaled by the (fractional) TD error, followed by
/// an importance-weighted minibatch pass over the episode's transitions.
#[allow(clippy::too_many_arguments)]
fn actor_critic_episode(
    env: &mut Env,
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    lr: &mut AdaptiveLrState,
    frac_cfg: Option<&FracTdConfig>,
    config: &TrainConfig,
    step_limit: usize,
    rng: &mut Rng64,
    mut obs: Vec<f64>,
    mode: DeltaMode,
) -> Result<EpisodeOutcome> {
    let mut frac_state = FracTdState::new();
    let mut buffer: Vec<Transition> = Vec::new();
    let mut step_grad_norms = Vec::new();
    let mut ret = 0.0;
    let mut max_fd = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    let mut steps = 0usize;

    loop {
        let (action, old_log_prob) = policy.sample(&obs, rng)?;
        let sr = env.step(&action)?;
        let v_curr = value.value(&obs)?;
        let v_next = value.value(&sr.observation)?;
        let delta = td_error(sr.reward, v_next, v_curr, config.gamma, sr.done);
        if !delta.is_finite() {
            return Err(Error::NumericalAbort(format!("TD error became {delta}")));
        }
        let frac_delta = match mode {
            DeltaMode::Recursive => {
                let cfg = frac_cfg.expect("fractional config present for recursive mode");
                recursive_step(cfg, &mut frac_state, delta)?
            }
            DeltaMode::Identity => {
                let cfg = frac_cfg.expect("fractional config present for identity mode");
                identity_step(cfg, &mut frac_state, delta)?
            }
            DeltaMode::Plain => delta,
        };
        if mode != DeltaMode::Plain {
            let cfg = frac_cfg.expect("fractional config present");
            if cfg.clipping_enabled {
                // Bound recomputed exactly as enforced inside the step
                // (state.t was incremented, max already includes this δ).
                let bound = cfg.clip_bound(frac_state.max_abs_delta, frac_state.t - 1);
                max_excess = max_excess.max(frac_delta.abs() - bound);
            }
        }

        let score = policy.score(&obs, &action)?;
        let rho = grad_norm(&score);
        lr.observe_policy_norm(rho);
        let lr_theta = lr.lr_theta(config.beta_theta);
        let vgrad = value.value_grad(&obs)?;
        let nu = grad_norm(&vgrad);
        lr.observe_value_norm(nu);
        let lr_v = lr.lr_v(config.beta_v);

        axpy(&mut policy.params, lr_theta * frac_delta, &score);
        policy.project_params();
        axpy(&mut value.params, lr_v * frac_delta, &vgrad);
        check_finite(policy, value, "online update")?;

        step_grad_norms.push(frac_delta.abs() * rho);
        max_fd = max_fd.max(frac_delta.abs());
        ret += sr.reward;
        steps += 1;
        buffer.push(Transition {
            state: obs,
            action,
            reward: sr.reward,
            next_state: sr.observation.clone(),
            old_log_prob,
            frac_delta,
            done: sr.done,
        });
        obs = sr.observation;
        if sr.done || sr.truncated || steps >= step_limit {
            break;
        }
    }

    if !config.ablations.minibatch_off {
        minibatch_update(policy, value, &buffer, config, rng)?;
    }

    Ok(EpisodeOutcome {
        steps,
        ret,
        step_grad_norms,
        max_abs_frac_delta: max_fd,
        clip_events: frac_state.clip_events,
        max_bound_excess: max_excess,
    })
}

/// Importance-weighted minibatch update over stored transitions:
/// w = min(exp(log π_now − stored log π), 1+ε); the batch-mean gradients
/// w·frac_delta·score and w·frac_delta·∇V are applied with the raw learning
/// rates. Samples uniformly without replacement; the batch size is capped at
/// the buffer length.
pub fn minibatch_update(
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    buffer: &[Transition],
    config: &TrainConfig,
    rng: &mut Rng64,
) -> Result<()> {
    if buffer.is_empty() {
        return Err(Error::EmptyBuffer);
    }
    let batch = config.minibatch.min(buffer.len());
    let picks = rng.sample_indices(buffer.len(), batch);
    let mut g_theta = vec![0.0; policy.params.len()];
    let mut g_v = vec![0.0; value.params.len()];
    for &i in &picks {
        let tr = &buffer[i];
        let log_prob_now = policy.log_prob(&tr.state, &tr.action)?;
        let w = importance_weight(log_prob_now, tr.old_log_prob, config.eps_clip);
        let scale = w * tr.frac_delta;
        let score = policy.score(&tr.state, &tr.action)?;
        axpy(&mut g_theta, scale, &score);
        let vgrad = value.value_grad(&tr.state)?;
        axpy(&mut g_v, scale, &vgrad);
    }
    let inv_b = 1.0 / batch as f64;
    axpy(&mut policy.params, config.beta_theta * inv_b, &g_theta);
    policy.project_params();
    axpy(&mut value.params, config.beta_v * inv_b, &g_v);
    check_finite(policy, value, "minibatch update")
}

/// Monte Carlo policy gradient: discounted returns-to-go times the score,
/// averaged over the episode and applied once at episode end. No critic.
#[allow(clippy::too_many_arguments)]
fn reinforce_episode(
    env: &mut Env,
    policy: &mut PolicyNet,
    lr: &mut AdaptiveLrState,
    config: &TrainConfig,
    step_limit: usize,
    rng: &mut Rng64,
    mut obs: Vec<f64>,
    ) -> Result<EpisodeOutcome> {
    let mut scores: Vec<Vec<f64>> = Vec::new();
    let mut rewards: Vec<f64> = Vec::new();
    let mut ret = 0.0;
    let mut steps = 0usize;
    loop {
        let (action, _) = policy.sample(&obs, rng)?;
        let sr = env.step(&action)?;
        scores.push(policy.score(&obs, &action)?);
        rewards.push(sr.reward);
        ret += sr.reward;
        steps += 1;
        obs = sr.observation;
        if sr.done || sr.truncated || steps >= step_limit {
            break;
        }
    }
    let returns = returns_to_go(&rewards, config.gamma, 0.0);
    let mut grad = vec![0.0; policy.params.len()];
    let inv_n = 1.0 / steps as f64;
    let mut step_grad_norms = Vec::with_capacity(steps);
    let mut max_g = 0.0f64;
    for (g_t, score) in returns.iter().zip(&scores) {
        axpy(&mut grad, g_t * inv_n, score);
        step_grad_norms.push(g_t.abs() * grad_norm(score));
        max_g = max_g.max(g_t.abs());
    }
    let rho = grad_norm(&grad);
    lr.observe_policy_norm(rho);
    axpy(&mut policy.params, lr.lr_theta(config.beta_theta), &grad);
    policy.project_params();
    if !policy.params_finite() {
        return Err(Error::NumericalAbort("policy parameters non-finite after episode update".into()));
    }
    Ok(EpisodeOutcome {
        steps,
        ret,
        step_grad_norms,
        max_abs_frac_delta: max_g,
        clip_events: 0,
        max_bound_excess: f64::NEG_INFINITY,
    })
}

/// Clipped-surrogate baseline: collect a full episode, compute normalized
/// Monte Carlo advantages (bootstrapped through truncation), then take four
/// shuffled minibatch epochs of the two-sided clipped objective plus value
/// regression toward the returns.
#[allow(clippy::too_many_arguments)]
fn ppo_lite_episode(
    env: &mut Env,
    policy: &mut PolicyNet,
    value: &mut ValueNet,
    lr: &mut AdaptiveLrState,
    config: &TrainConfig,
    step_limit: usize,
    rng: &mut Rng64,
    mut obs: Vec<f64>,
) -> Result<EpisodeOutcome> {
    const EPOCHS: usize = 4;
    let mut states: Vec<Vec<f64>> = Vec::new();
    let mut actions: Vec<Action> = Vec::new();
    let mut old_log_probs: Vec<f64> = Vec::new();
    let mut rewards: Vec<f64> = Vec::new();
    let mut collect_scores: Vec<Vec<f64>> = Vec::new();
    let mut ret = 0.0;
    let mut steps = 0usize;
    let (mut last_next, mut last_done);
    loop {
        let (action, lp) = policy.sample(&obs, rng)?;
        let sr = env.step(&action)?;
        collect_scores.push(policy.score(&obs, &action)?);
        states.push(obs);
        actions.push(action);
        old_log_probs.push(lp);
        rewards.push(sr.reward);
        ret += sr.reward;
        steps += 1;
        last_next = sr.observation.clone();
        last_done = sr.done;
        obs = sr.observation;
        if sr.done || sr.truncated || steps >= step_limit {
            break;
        }
    }
    let bootstrap = if last_done { 0.0 } else { value.value(&last_next)? };
    let returns = returns_to_go(&rewards, config.gamma, bootstrap);
    let mut advantages: Vec<f64> = Vec::with_capacity(steps);
    for (g_t, s) in returns.iter().zip(&states) {
        advantages.push(g_t - value.value(s)?);
    }
    let mean = advantages.iter().sum::<f64>() / steps as f64;
    let var = population_variance(&advantages);
    let sd = var.sqrt();
    for a in &mut advantages {
        *a = (*a - mean) / (sd + 1e-8);
    }

    let mut step_grad_norms = Vec::with_capacity(steps);
    let mut max_a = 0.0f64;
    for (a, score) in advantages.iter().zip(&collect_scores) {
        step_grad_norms.push(a.abs() * grad_norm(score));
        max_a = max_a.max(a.abs());
    }

    for _ in 0..EPOCHS {
        let order = rng.sample_indices(steps, steps);
        for chunk in order.chunks(config.minibatch) {
            let mut g_theta = vec![0.0; policy.params.len()];
            let mut g_v = vec![0.0; value.params.len()];
            for &i in chunk {
                let lp_now = policy.log_prob(&states[i], &actions[i])?;
                let ratio = (lp_now - old_log_probs[i]).exp();
                let factor = ppo_grad_factor(ratio, advantages[i], config.eps_clip);
                if factor != 0.0 {
                    let score = policy.score(&states[i], &actions[i])?;
                    axpy(&mut g_theta, factor, &score);
                }
                let v_now = value.value(&states[i])?;
                let vgrad = value.value_grad(&states[i])?;
                axpy(&mut g_v, returns[i] - v_now, &vgrad);
            }
            let inv = 1.0 / chunk.len() as f64;
            for g in &mut g_theta {
                *g *= inv;
            }
            for g in &mut g_v {
                *g *= inv;
            }
            let rho = grad_norm(&g_theta);
            lr.observe_policy_norm(rho);
            axpy(&mut policy.params, lr.lr_theta(config.beta_theta), &g_theta);
            policy.project_params();
            let nu = grad_norm(&g_v);
            lr.observe_value_norm(nu);
            axpy(&mut value.params, lr.lr_v(config.beta_v), &g_v);
            check_finite(policy, value, "surrogate minibatch update")?;
        }
    }
    Ok(EpisodeOutcome {
        steps,
        ret,
        step_grad_norms,
        max_abs_frac_delta: max_a,
        clip_events: 0,
        max_bound_excess: f64::NEG_INFINITY,
    })
}
