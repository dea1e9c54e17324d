//! Fractional TD errors: the exact convolution oracle, a truncated FIR
//! approximation, and the constant-memory recursive estimator with
//! stabilization and adaptive clipping.
//!
//! The recursive estimator keeps four scalars of state no matter how long the
//! episode runs. Its per-step form is `fd_t = η·δ_t + μ_t·fd_{t−1}`, followed
//! (when enabled) by a multiplicative clip to
//! `c_α·max_{k≤t}|δ_k| + κ·(t+1)^{−α−1}`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::bench::stats::{median, variance_decay_fit};
use crate::error::{Error, Result};
use crate::frac_math::{check_alpha, gl_weights, stabilization_constants, StabilizationConstants};
use crate::rng::Rng64;

/// How the recursion coefficient μ_t is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuVariant {
    /// ((t−1+α)/t)^α — the closed-form ratio.
    PowerRatio,
    /// exp(α·[ln(t+ε) − ln(t−1+α+ε)]) — log-space form with tolerance ε.
    StabilizedLog,
    /// max(0, 1 − (1+α)/t) — first-order linear approximation.
    LinearDecay,
}

impl MuVariant {
    pub const ALL: [MuVariant; 3] =
        [MuVariant::PowerRatio, MuVariant::StabilizedLog, MuVariant::LinearDecay];

    pub fn as_str(self) -> &'static str {
        match self {
            MuVariant::PowerRatio => "power_ratio",
            MuVariant::StabilizedLog => "stabilized_log",
            MuVariant::LinearDecay => "linear_decay",
        }
    }
}

impl fmt::Display for MuVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MuVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power_ratio" => Ok(MuVariant::PowerRatio),
            "stabilized_log" => Ok(MuVariant::StabilizedLog),
            "linear_decay" => Ok(MuVariant::LinearDecay),
            other => Err(Error::Config(format!(
                "unknown mu variant '{other}' (expected power_ratio, stabilized_log, or linear_decay)"
            ))),
        }
    }
}

/// How the input gain η is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaVariant {
    /// η = 1/Γ(1−α).
    InverseGamma,
    /// η = 1, so a lone first step passes through unchanged.
    Unit,
}

impl EtaVariant {
    pub const ALL: [EtaVariant; 2] = [EtaVariant::InverseGamma, EtaVariant::Unit];

    pub fn as_str(self) -> &'static str {
        match self {
            EtaVariant::InverseGamma => "inverse_gamma",
            EtaVariant::Unit => "unit",
        }
    }
}

impl fmt::Display for EtaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EtaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse_gamma" => Ok(EtaVariant::InverseGamma),
            "unit" => Ok(EtaVariant::Unit),
            other => Err(Error::Config(format!(
                "unknown eta variant '{other}' (expected inverse_gamma or unit)"
            ))),
        }
    }
}

/// All (μ, η) variant pairs, in a stable order.
pub fn all_variant_pairs() -> Vec<(MuVariant, EtaVariant)> {
    let mut out = Vec::with_capacity(6);
    for mu in MuVariant::ALL {
        for eta in EtaVariant::ALL {
            out.push((mu, eta));
        }
    }
    out
}

/// Configuration of the recursive fractional TD estimator.
///
/// Construct via [`FracTdConfig::new`] so that `alpha` and `constants` stay
/// consistent; the variant and clipping fields may be adjusted afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracTdConfig {
    pub alpha: f64,
    pub mu_variant: MuVariant,
    pub eta_variant: EtaVariant,
    /// Tolerance ε used inside the log-space μ variant. Must stay positive.
    pub eps_tol: f64,
    pub clipping_enabled: bool,
    pub constants: StabilizationConstants,
}

impl FracTdConfig {
    /// Defaults: power-ratio μ, inverse-gamma η, clipping on, ε = 1e−8.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_variants(alpha, MuVariant::PowerRatio, EtaVariant::InverseGamma)
    }

    pub fn with_variants(alpha: f64, mu_variant: MuVariant, eta_variant: EtaVariant) -> Result<Self> {
        let constants = stabilization_constants(alpha)?;
        Ok(FracTdConfig {
            alpha,
            mu_variant,
            eta_variant,
            eps_tol: 1e-8,
            clipping_enabled: true,
            constants,
        })
    }

    /// Input gain η for the configured variant.
    pub fn eta(&self) -> f64 {
        match self.eta_variant {
            EtaVariant::InverseGamma => self.constants.eta,
            EtaVariant::Unit => 1.0,
        }
    }

    /// Recursion coefficient μ_t. Returns 0 at t = 0: the first step has no
    /// history, and evaluating the formulas there would divide by zero.
    pub fn mu_factor(&self, t: u64) -> f64 {
        if t == 0 {
            return 0.0;
        }
        let tf = t as f64;
        match self.mu_variant {
            MuVariant::PowerRatio => ((tf - 1.0 + self.alpha) / tf).powf(self.alpha),
            MuVariant::StabilizedLog => (self.alpha
                * ((tf + self.eps_tol).ln() - (tf - 1.0 + self.alpha + self.eps_tol).ln()))
            .exp(),
            MuVariant::LinearDecay => (1.0 - (1.0 + self.alpha) / tf).max(0.0),
        }
    }

    /// Clip bound active at 0-based step `t`:
    /// c_α·max_abs_delta + κ·(t+1)^{−α−1}.
    pub fn clip_bound(&self, max_abs_delta: f64, t: u64) -> f64 {
        self.constants.c_alpha * max_abs_delta
            + self.constants.kappa * ((t + 1) as f64).powf(-self.alpha - 1.0)
    }
}

/// Running state of the recursive estimator: four scalars, independent of t.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FracTdState {
    /// 0-based index of the next step to process.
    pub t: u64,
    /// fd_{t−1}, the previous fractional TD error (0 before the first step).
    pub prev_frac_delta: f64,
    /// max_{k<t} |δ_k|, running maximum of raw TD error magnitudes.
    pub max_abs_delta: f64,
    /// Number of steps on which the clip bound was applied.
    pub clip_events: u64,
}

impl FracTdState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Episode boundary: everything resets, including the running maximum.
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// One-step TD error r + γ·V(s′)·(1 − done) − V(s).
pub fn td_error(reward: f64, v_next: f64, v_curr: f64, gamma: f64, done: bool) -> f64 {
    debug_assert!(gamma > 0.0 && gamma <= 1.0, "gamma must be in (0, 1]");
    let cont = if done { 0.0 } else { 1.0 };
    reward + gamma * v_next * cont - v_curr
}

/// Advance the recursive estimator by one step and return fd_t.
///
/// Applies `fd_t = η·δ_t + μ_t·fd_{t−1}`, then (if enabled) rescales fd_t to
/// the clip bound, preserving its sign. The running max includes the current
/// δ_t, so the bound can bind even on the very first step.
pub fn recursive_step(config: &FracTdConfig, state: &mut FracTdState, delta: f64) -> Result<f64> {
    if !delta.is_finite() {
        return Err(Error::NonFinite(format!("recursive_step received delta = {delta}")));
    }
    let raw = config.eta() * delta + config.mu_factor(state.t) * state.prev_frac_delta;
    Ok(clip_and_advance(config, state, delta, raw))
}

/// Ablation path with the recursion disabled: the "fractional" TD error is
/// just δ_t, but clipping and state bookkeeping behave exactly as in
/// [`recursive_step`].
pub fn identity_step(config: &FracTdConfig, state: &mut FracTdState, delta: f64) -> Result<f64> {
    if !delta.is_finite() {
        return Err(Error::NonFinite(format!("identity_step received delta = {delta}")));
    }
    Ok(clip_and_advance(config, state, delta, delta))
}

fn clip_and_advance(config: &FracTdConfig, state: &mut FracTdState, delta: f64, raw: f64) -> f64 {
    let abs_d = delta.abs();
    if abs_d > state.max_abs_delta {
        state.max_abs_delta = abs_d;
    }
    let mut fd = raw;
    if config.clipping_enabled {
        let bound = config.clip_bound(state.max_abs_delta, state.t);
        if fd.abs() > bound {
            fd = bound.copysign(fd);
            state.clip_events += 1;
        }
    }
    state.prev_frac_delta = fd;
    state.t += 1;
    fd
}

/// Inner convolution kernel shared by the exact and FIR paths so that an
/// untruncated window reproduces the exact output bit-for-bit.
#[inline]
fn conv_at(weights: &[f64], deltas: &[f64], t: usize, window: usize) -> f64 {
    let kmax = t.min(window - 1);
    let mut acc = 0.0;
    for k in 0..=kmax {
        acc += weights[k] * deltas[t - k];
    }
    acc
}

/// Exact fractional TD errors by full convolution with the difference
/// weights: fd_t = Σ_{k=0}^{t} ω_k·δ_{t−k}. O(t) per step; the reference
/// oracle for everything else in this module.
pub fn exact_frac_td(deltas: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if deltas.is_empty() {
        return Ok(Vec::new());
    }
    let weights = gl_weights(alpha, deltas.len() - 1)?;
    Ok((0..deltas.len()).map(|t| conv_at(&weights, deltas, t, usize::MAX)).collect())
}

/// Convolution truncated to the most recent `window` weights (FIR
/// approximation, O(window) per step). `window = 1` returns the input
/// unchanged; `window ≥ deltas.len()` matches [`exact_frac_td`] bit-for-bit.
pub fn fir_frac_td(deltas: &[f64], alpha: f64, window: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if window == 0 {
        return Err(Error::Domain("fir_frac_td window must be >= 1".into()));
    }
    if deltas.is_empty() {
        return Ok(Vec::new());
    }
    let weights = gl_weights(alpha, deltas.len() - 1)?;
    Ok((0..deltas.len()).map(|t| conv_at(&weights, deltas, t, window)).collect())
}

/// FIR window used by the fidelity report's timing comparison.
pub const FIR_REPORT_WINDOW: usize = 64;

const REPORT_SEED_BASE: u64 = 0x00f1_de11;

/// Per-step fidelity of one (μ, η) variant, aggregated across seeds.
#[derive(Debug, Clone)]
pub struct KernelStepStat {
    /// 0-based step index.
    pub t: usize,
    /// Envelope |recursive − exact|: maximum across seeds.
    pub abs_error: f64,
    /// Largest clip bound active at this step across seeds.
    pub bound_value: f64,
    /// Median per-step wall time across seeds, nanoseconds.
    pub step_time_ns: f64,
}

#[derive(Debug, Clone)]
pub struct VariantFidelity {
    pub mu_variant: MuVariant,
    pub eta_variant: EtaVariant,
    pub steps: Vec<KernelStepStat>,
    /// Log-log slope of the error envelope over the second half of steps.
    pub error_slope: f64,
    pub slope_r2: f64,
    /// Total clip events across all seeds.
    pub clip_events_total: u64,
    /// Post-clip bound violations observed (should be zero).
    pub bound_violations: u64,
}

/// Per-step wall-time profile of one evaluation strategy.
#[derive(Debug, Clone)]
pub struct TimingProfile {
    pub label: String,
    /// Median across seeds, indexed by step.
    pub per_step_ns: Vec<f64>,
    pub first_decile_mean_ns: f64,
    pub last_decile_mean_ns: f64,
}

impl TimingProfile {
    /// Last-decile mean divided by first-decile mean: ≈1 for O(1) kernels,
    /// large for kernels whose per-step cost grows with t.
    pub fn decile_ratio(&self) -> f64 {
        self.last_decile_mean_ns / self.first_decile_mean_ns
    }

    fn from_seed_times(label: &str, per_seed: &[Vec<f64>]) -> Self {
        let horizon = per_seed[0].len();
        let mut per_step_ns = Vec::with_capacity(horizon);
        let mut column = Vec::with_capacity(per_seed.len());
        for t in 0..horizon {
            column.clear();
            column.extend(per_seed.iter().map(|s| s[t]));
            per_step_ns.push(median(&column).unwrap_or(f64::NAN));
        }
        let decile = (horizon / 10).max(1);
        let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
        TimingProfile {
            label: label.to_string(),
            first_decile_mean_ns: mean(&per_step_ns[..decile]),
            last_decile_mean_ns: mean(&per_step_ns[horizon - decile..]),
            per_step_ns,
        }
    }
}

/// Output of [`kernel_fidelity_report`].
#[derive(Debug, Clone)]
pub struct KernelFidelityReport {
    pub alpha: f64,
    pub horizon: usize,
    pub seeds: usize,
    pub fir_window: usize,
    pub variants: Vec<VariantFidelity>,
    /// Envelope |FIR − exact| across seeds, per step.
    pub fir_abs_error: Vec<f64>,
    pub naive_timing: TimingProfile,
    pub fir_timing: TimingProfile,
    pub recursive_timing: TimingProfile,
}

impl KernelFidelityReport {
    /// Most negative error-envelope slope across the reported variants.
    pub fn best_slope(&self) -> f64 {
        self.variants.iter().map(|v| v.error_slope).fold(f64::INFINITY, f64::min)
    }

    pub fn best_variant(&self) -> Option<&VariantFidelity> {
        self.variants
            .iter()
            .min_by(|a, b| a.error_slope.partial_cmp(&b.error_slope).unwrap())
    }
}

/// Measure per-step fidelity and cost of the recursive estimator against the
/// exact convolution on random δ sequences drawn uniformly from [−1, 1].
///
/// For each variant pair the recursion runs with clipping enabled (the
/// trainer's default); errors are envelopes (max across seeds) and the
/// reported slope is a least-squares fit of log error against log t over the
/// second half of the horizon. Naive and FIR per-step wall times come from
/// the same sequences; times are medians across seeds.
pub fn kernel_fidelity_report(
    alpha: f64,
    horizon: usize,
    seeds: usize,
    variants: &[(MuVariant, EtaVariant)],
) -> Result<KernelFidelityReport> {
    check_alpha(alpha)?;
    if horizon < 100 {
        return Err(Error::Domain(format!(
            "kernel_fidelity_report needs horizon >= 100, got {horizon}"
        )));
    }
    if seeds == 0 {
        return Err(Error::InsufficientData("kernel_fidelity_report needs >= 1 seed".into()));
    }
    if variants.is_empty() {
        return Err(Error::InsufficientData(
            "kernel_fidelity_report needs >= 1 variant pair".into(),
        ));
    }

    let weights = gl_weights(alpha, horizon - 1)?;

    // Warm up the timer and branch predictors so the first decile is not
    // systematically slower than the rest.
    {
        let cfg = FracTdConfig::new(alpha)?;
        let mut st = FracTdState::new();
        let mut sink = 0.0;
        for i in 0..20_000 {
            sink += recursive_step(&cfg, &mut st, (i % 7) as f64 * 0.1 - 0.3)?;
        }
        std::hint::black_box(sink);
    }

    let mut err_envelope = vec![vec![0.0f64; horizon]; variants.len()];
    let mut bound_envelope = vec![vec![0.0f64; horizon]; variants.len()];
    let mut rec_times = vec![vec![vec![0.0f64; horizon]; seeds]; variants.len()];
    let mut clip_totals = vec![0u64; variants.len()];
    let mut violations = vec![0u64; variants.len()];
    let mut fir_err_envelope = vec![0.0f64; horizon];
    let mut naive_times = vec![vec![0.0f64; horizon]; seeds];
    let mut fir_times = vec![vec![0.0f64; horizon]; seeds];

    for seed in 0..seeds {
        let mut rng = Rng64::new(REPORT_SEED_BASE.wrapping_add(seed as u64));
        let deltas: Vec<f64> = (0..horizon).map(|_| rng.uniform_in(-1.0, 1.0)).collect();

        // Naive full convolution, timed per step; its outputs are the oracle.
        let mut exact = Vec::with_capacity(horizon);
        for (t, slot) in naive_times[seed].iter_mut().enumerate() {
            let start = Instant::now();
            let v = conv_at(&weights, &deltas, t, usize::MAX);
            *slot = start.elapsed().as_nanos() as f64;
            exact.push(v);
        }

        for t in 0..horizon {
            let start = Instant::now();
            let v = conv_at(&weights, &deltas, t, FIR_REPORT_WINDOW);
            fir_times[seed][t] = start.elapsed().as_nanos() as f64;
            let e = (v - exact[t]).abs();
            if e > fir_err_envelope[t] {
                fir_err_envelope[t] = e;
            }
        }

        for (vi, &(mu, eta)) in variants.iter().enumerate() {
            let cfg = FracTdConfig::with_variants(alpha, mu, eta)?;
            let mut state = FracTdState::new();
            for (t, &d) in deltas.iter().enumerate() {
                let start = Instant::now();
                let fd = recursive_step(&cfg, &mut state, d)?;
                rec_times[vi][seed][t] = start.elapsed().as_nanos() as f64;
                let e = (fd - exact[t]).abs();
                if e > err_envelope[vi][t] {
                    err_envelope[vi][t] = e;
                }
                let bound = cfg.clip_bound(state.max_abs_delta, t as u64);
                if bound > bound_envelope[vi][t] {
                    bound_envelope[vi][t] = bound;
                }
                if fd.abs() > bound {
                    violations[vi] += 1;
                }
            }
            clip_totals[vi] += state.clip_events;
        }
    }

    let mut out_variants = Vec::with_capacity(variants.len());
    for (vi, &(mu, eta)) in variants.iter().enumerate() {
        let timing = TimingProfile::from_seed_times("recursive", &rec_times[vi]);
        let steps: Vec<KernelStepStat> = (0..horizon)
            .map(|t| KernelStepStat {
                t,
                abs_error: err_envelope[vi][t],
                bound_value: bound_envelope[vi][t],
                step_time_ns: timing.per_step_ns[t],
            })
            .collect();
        let pts: Vec<(f64, f64)> =
            steps.iter().map(|s| (s.t as f64, s.abs_error)).collect();
        let (error_slope, slope_r2) = variance_decay_fit(&pts)?;
        out_variants.push(VariantFidelity {
            mu_variant: mu,
            eta_variant: eta,
            steps,
            error_slope,
            slope_r2,
            clip_events_total: clip_totals[vi],
            bound_violations: violations[vi],
        });
    }

    Ok(KernelFidelityReport {
        alpha,
        horizon,
        seeds,
        fir_window: FIR_REPORT_WINDOW,
        variants: out_variants,
        fir_abs_error: fir_err_envelope,
        naive_timing: TimingProfile::from_seed_times("naive", &naive_times),
        fir_timing: TimingProfile::from_seed_times("fir", &fir_times),
        recursive_timing: TimingProfile::from_seed_times("recursive", &rec_times[0]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn td_error_examples() {
        assert_eq!(td_error(1.0, 0.0, 0.0, 0.99, false), 1.0);
        assert_eq!(td_error(0.0, 10.0, 10.0, 1.0, false), 0.0);
        assert_eq!(td_error(1.0, 5.0, 2.0, 0.9, true), -1.0);
    }

    #[test]
    fn exact_impulse_recovers_weights() {
        let out = exact_frac_td(&[1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
        let expect = [1.0, -0.5, -0.125, -0.0625];
        for (o, e) in out.iter().zip(expect) {
            assert_relative_eq!(*o, e, max_relative = 1e-14);
        }
    }

    #[test]
    fn exact_first_step_passthrough() {
        for &d in &[3.25, -1.5, 0.0] {
            assert_eq!(exact_frac_td(&[d], 0.7).unwrap()[0], d);
        }
        assert!(exact_frac_td(&[], 0.5).unwrap().is_empty());
    }

    #[test]
    fn exact_constant_sequence_partial_sums() {
        let c = 2.0;
        let out = exact_frac_td(&[c, c, c], 0.5).unwrap();
        let expect = [c, 0.5 * c, 0.375 * c];
        for (o, e) in out.iter().zip(expect) {
            assert_relative_eq!(*o, e, max_relative = 1e-14);
        }
    }

    #[test]
    fn fir_matches_exact_when_untruncated() {
        let mut rng = Rng64::new(7);
        let deltas: Vec<f64> = (0..50).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let exact = exact_frac_td(&deltas, 0.6).unwrap();
        for window in [deltas.len(), deltas.len() + 1, usize::MAX] {
            let fir = fir_frac_td(&deltas, 0.6, window).unwrap();
            assert_eq!(fir, exact, "window {window} must be bit-identical");
        }
    }

    #[test]
    fn fir_window_one_is_identity() {
        let deltas = [0.3, -1.2, 4.5, 0.0, 2.0];
        let out = fir_frac_td(&deltas, 0.4, 1).unwrap();
        assert_eq!(out, deltas);
    }

    #[test]
    fn fir_impulse_truncation() {
        let out = fir_frac_td(&[1.0, 0.0, 0.0, 0.0], 0.5, 2).unwrap();
        let expect = [1.0, -0.5, 0.0, 0.0];
        for (o, e) in out.iter().zip(expect) {
            assert_relative_eq!(*o, e, max_relative = 1e-14);
        }
        assert!(fir_frac_td(&[1.0], 0.5, 0).is_err());
    }

    #[test]
    fn recursive_first_step_unit_eta() {
        let mut cfg = FracTdConfig::with_variants(0.5, MuVariant::PowerRatio, EtaVariant::Unit)
            .unwrap();
        cfg.clipping_enabled = false;
        let mut state = FracTdState::new();
        let fd = recursive_step(&cfg, &mut state, 2.0).unwrap();
        assert_eq!(fd, 2.0);
        assert_eq!(state.t, 1);
        assert_eq!(state.prev_frac_delta, 2.0);
        assert_eq!(state.max_abs_delta, 2.0);
        assert_eq!(state.clip_events, 0);
    }

    #[test]
    fn recursive_first_step_inverse_gamma_eta() {
        // η = 1/Γ(0.5) = 1/√π, so fd_0 = 2/√π; the bound (≈1.615) does not bind.
        let cfg = FracTdConfig::new(0.5).unwrap();
        let mut state = FracTdState::new();
        let fd = recursive_step(&cfg, &mut state, 2.0).unwrap();
        assert_relative_eq!(fd, 1.1283791670955126, max_relative = 1e-12);
        assert!((fd - 1.128379167).abs() < 1e-9);
        assert_eq!(state.clip_events, 0);
    }

    #[test]
    fn recursive_first_step_clips_large_input() {
        // With unit η and clipping on, fd_0 = 2 exceeds the bound
        // c_α·2 + κ·1 and is rescaled onto it.
        let cfg = FracTdConfig::with_variants(0.5, MuVariant::PowerRatio, EtaVariant::Unit)
            .unwrap();
        let mut state = FracTdState::new();
        let fd = recursive_step(&cfg, &mut state, 2.0).unwrap();
        assert_relative_eq!(fd, 1.6149223559322293, max_relative = 1e-12);
        assert_eq!(state.clip_events, 1);
    }

    #[test]
    fn mu_factor_reference_values() {
        let cfg = |mu| FracTdConfig::with_variants(0.5, mu, EtaVariant::Unit).unwrap();
        // Log-space variant at t = 1: (1/0.5)^0.5 up to the ε perturbation.
        let m = cfg(MuVariant::StabilizedLog).mu_factor(1);
        assert!((m - 1.414214).abs() < 1e-5, "stabilized_log mu(1) = {m}");
        // Power-ratio variant at t = 2: √0.75.
        assert_relative_eq!(
            cfg(MuVariant::PowerRatio).mu_factor(2),
            0.8660254037844386,
            max_relative = 1e-12
        );
        // Linear-decay variant clamps at zero for small t.
        assert_eq!(cfg(MuVariant::LinearDecay).mu_factor(1), 0.0);
        assert_relative_eq!(
            cfg(MuVariant::LinearDecay).mu_factor(3),
            0.5,
            max_relative = 1e-14
        );
        // t = 0 always yields zero: no history to weight.
        for mu in MuVariant::ALL {
            assert_eq!(cfg(mu).mu_factor(0), 0.0);
        }
    }

    #[test]
    fn mu_factors_approach_one() {
        for alpha in [0.1, 0.35, 0.5, 0.65, 0.9] {
            for mu in MuVariant::ALL {
                let cfg = FracTdConfig::with_variants(alpha, mu, EtaVariant::Unit).unwrap();
                for t in [10u64, 11, 17, 50, 100, 1000, 100_000] {
                    let m = cfg.mu_factor(t);
                    let lim = 2.0 * (1.0 + alpha) / t as f64;
                    assert!(
                        (m - 1.0).abs() < lim,
                        "{mu:?} alpha={alpha} t={t}: |{m} - 1| >= {lim}"
                    );
                }
            }
        }
    }

    #[test]
    fn clipping_preserves_sign() {
        let cfg = FracTdConfig::with_variants(0.5, MuVariant::PowerRatio, EtaVariant::Unit)
            .unwrap();
        let mut pos = FracTdState::new();
        let mut neg = FracTdState::new();
        for _ in 0..50 {
            let p = recursive_step(&cfg, &mut pos, 1.0).unwrap();
            let n = recursive_step(&cfg, &mut neg, -1.0).unwrap();
            assert!(p > 0.0);
            assert!(n < 0.0);
            assert_eq!(p, -n);
        }
        assert!(pos.clip_events > 0, "constant input must hit the bound");
    }

    #[test]
    fn non_finite_delta_rejected() {
        let cfg = FracTdConfig::new(0.5).unwrap();
        let mut state = FracTdState::new();
        assert!(recursive_step(&cfg, &mut state, f64::NAN).is_err());
        assert!(recursive_step(&cfg, &mut state, f64::INFINITY).is_err());
        assert!(identity_step(&cfg, &mut state, f64::NEG_INFINITY).is_err());
        // A failed step must not advance state.
        assert_eq!(state, FracTdState::new());
    }

    #[test]
    fn identity_step_passes_delta_through() {
        let mut cfg = FracTdConfig::new(0.5).unwrap();
        cfg.clipping_enabled = false;
        let mut state = FracTdState::new();
        for &d in &[0.4, -2.5, 11.0, 0.0] {
            assert_eq!(identity_step(&cfg, &mut state, d).unwrap(), d);
        }
        assert_eq!(state.t, 4);
        assert_eq!(state.max_abs_delta, 11.0);
        assert_eq!(state.clip_events, 0);
    }

    #[test]
    fn state_reset_and_constant_size() {
        let cfg = FracTdConfig::new(0.5).unwrap();
        let mut state = FracTdState::new();
        for _ in 0..10 {
            recursive_step(&cfg, &mut state, 3.0).unwrap();
        }
        state.reset();
        assert_eq!(state, FracTdState::new());
        // Constant-memory claim: the state is four scalar fields.
        assert_eq!(std::mem::size_of::<FracTdState>(), 32);
    }

    #[test]
    fn kernel_report_shape_and_determinism() {
        let variants =all_variant_pairs();
        assert_eq!(variants.len(), 6);
        let r1 = kernel_fidelity_report(0.5, 120, 2, &variants).unwrap();
        let r2 = kernel_fidelity_report(0.5, 120, 2, &variants).unwrap();
        assert_eq!(r1.variants.len(), 6);
        for (a, b) in r1.variants.iter().zip(&r2.variants) {
            assert_eq!(a.steps.len(), 120);
            assert_eq!(a.bound_violations, 0);
            assert!(a.error_slope.is_finite());
            // Errors and bounds are deterministic; only timings vary.
            for (sa, sb) in a.steps.iter().zip(&b.steps) {
                assert_eq!(sa.abs_error, sb.abs_error);
                assert_eq!(sa.bound_value, sb.bound_value);
                assert!(sa.step_time_ns >= 0.0);
            }
            assert_eq!(a.clip_events_total, b.clip_events_total);
        }
        // FIR is exact inside its window and approximate beyond it.
        assert!(r1.fir_abs_error[..FIR_REPORT_WINDOW].iter().all(|&e| e == 0.0));
        assert!(r1.fir_abs_error[FIR_REPORT_WINDOW..].iter().any(|&e| e > 0.0));
        assert!(r1.naive_timing.decile_ratio().is_finite());
        assert!(r1.best_slope().is_finite());
        assert!(r1.best_variant().is_some());
    }

    #[test]
    fn kernel_report_input_validation() {
        let v = all_variant_pairs();
        assert!(kernel_fidelity_report(0.5, 99, 2, &v).is_err());
        assert!(kernel_fidelity_report(0.5, 100, 0, &v).is_err());
        assert!(kernel_fidelity_report(0.5, 100, 1, &[]).is_err());
        assert!(kernel_fidelity_report(1.5, 100, 1, &v).is_err());
    }

    #[test]
    fn variant_string_round_trips() {
        for mu in MuVariant::ALL {
            assert_eq!(mu.as_str().parse::<MuVariant>().unwrap(), mu);
        }
        for eta in EtaVariant::ALL {
            assert_eq!(eta.as_str().parse::<EtaVariant>().unwrap(), eta);
        }
        assert!("geometric".parse::<MuVariant>().is_err());
        assert!("".parse::<EtaVariant>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// After every step with clipping enabled, the stored value respects
        /// the bound computed from the post-step state.
        #[test]
        fn prop_post_step_bound_holds(
            alpha in 0.05f64..0.95,
            deltas in proptest::collection::vec(-50.0f64..50.0, 1..120),
        ) {
            let cfg = FracTdConfig::new(alpha).unwrap();
            let mut state = FracTdState::new();
            for &d in &deltas {
                let fd = recursive_step(&cfg, &mut state, d).unwrap();
                let bound = cfg.constants.c_alpha * state.max_abs_delta
                    + cfg.constants.kappa * (state.t as f64).powf(-alpha - 1.0);
                prop_assert!(fd.abs() <= bound);
                prop_assert_eq!(fd, state.prev_frac_delta);
            }
        }

        /// The exact convolution obeys |fd_t| ≤ max|δ|·Σ_{k≤t}|ω_k|.
        #[test]
        fn prop_oracle_bound(
            alpha in 0.05f64..0.95,
            deltas in proptest::collection::vec(-10.0f64..10.0, 1..80),
        ) {
            let out = exact_frac_td(&deltas, alpha).unwrap();
            let weights = gl_weights(alpha, deltas.len() - 1).unwrap();
            let max_d = deltas.iter().fold(0.0f64, |m, &d| m.max(d.abs()));
            let mut wsum = 0.0;
            for (t, fd) in out.iter().enumerate() {
                wsum += weights[t].abs();
                prop_assert!(fd.abs() <= max_d * wsum + 1e-12);
            }
        }

        /// FIR with window = length is bit-identical to the exact path.
        #[test]
        fn prop_fir_full_window_identity(
            alpha in 0.05f64..0.95,
            deltas in proptest::collection::vec(-5.0f64..5.0, 1..60),
        ) {
            let exact = exact_frac_td(&deltas, alpha).unwrap();
            let fir = fir_frac_td(&deltas, alpha, deltas.len()).unwrap();
            prop_assert_eq!(exact, fir);
        }
    }
}
