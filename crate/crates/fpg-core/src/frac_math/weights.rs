//! Discrete fractional-operator coefficient sequences.
//!
//! Two families, both for order α ∈ (0, 1):
//!
//! - Grünwald–Letnikov weights ω_k = (−1)^k C(α, k): alternating-sign
//!   coefficients of (1−z)^α. ω₀ = 1, every later weight is negative, the
//!   magnitudes decay like k^{−α−1}/|Γ(−α)|, and the whole sequence sums to
//!   zero (partial sums (−1)^n C(α−1, n) ↓ 0).
//! - Riemann–Liouville kernels ψ_k = C(k+α−1, k): positive, decreasing
//!   coefficients of (1−z)^{−α}, with Σ ψ_k z^k = (1−z)^{−α} for |z| < 1.
//!
//! Each family has a one-term recurrence (the implementation) and an
//! independent gamma-ratio closed form (the cross-check oracle).

use super::check_alpha;
use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};

/// ω₀..ω_n via the recurrence ω_k = ω_{k−1}·(1 − (α+1)/k).
pub fn gl_weights(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut w = Vec::with_capacity(n + 1);
    w.push(1.0);
    for k in 1..=n {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (alpha + 1.0) / k as f64));
    }
    Ok(w)
}

/// ω_k through the independent closed form Γ(k−α) / (Γ(−α) Γ(k+1)),
/// evaluated in log space so large k neither overflows nor loses the sign
/// (Γ(−α) < 0 for α ∈ (0,1), so every ω_k with k ≥ 1 is negative).
pub fn gl_weight_gamma_ratio(alpha: f64, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if k == 0 {
        return Ok(1.0);
    }
    let lg = ln_gamma(k as f64 - alpha)? - ln_gamma(k as f64 + 1.0)?;
    Ok(lg.exp() / gamma(-alpha)?)
}

/// Closed form of the partial sum Σ_{k=0}^{n} ω_k = (−1)^n C(α−1, n)
/// = Γ(n+1−α) / (Γ(1−α) Γ(n+1)); positive and strictly decreasing to zero.
pub fn gl_partial_sum_closed_form(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let lg = ln_gamma(n as f64 + 1.0 - alpha)? - ln_gamma(n as f64 + 1.0)?;
    Ok(lg.exp() / gamma(1.0 - alpha)?)
}

/// Two-term large-k expansion of ω_k:
/// ω_k ≈ k^{−α−1}/Γ(−α) · (1 + α(α+1)/(2k)), k ≥ 1.
pub fn gl_weight_asymptotic(alpha: f64, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::Domain(
            "asymptotic weight expansion requires k >= 1".into(),
        ));
    }
    let kf = k as f64;
    Ok(kf.powf(-alpha - 1.0) / gamma(-alpha)? * (1.0 + alpha * (alpha + 1.0) / (2.0 * kf)))
}

/// ψ₀..ψ_n via ψ_k = ψ_{k−1}·(k−1+α)/k.
pub fn rl_kernels(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    for k in 1..=n {
        let prev = p[k - 1];
        p.push(prev * (k as f64 - 1.0 + alpha) / k as f64);
    }
    Ok(p)
}

/// ψ_k through the independent closed form Γ(k+α) / (Γ(α) Γ(k+1)).
pub fn rl_kernel_gamma_ratio(alpha: f64, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    if k == 0 {
        return Ok(1.0);
    }
    let lg = ln_gamma(k as f64 + alpha)? - ln_gamma(k as f64 + 1.0)?;
    Ok(lg.exp() / gamma(alpha)?)
}
