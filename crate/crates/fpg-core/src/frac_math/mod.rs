//! Special functions and discrete fractional-calculus kernels.
//!
//! Everything downstream (fractional TD errors, stabilization constants)
//! reduces to four ingredients implemented here:
//!
//! | item | definition |
//! |------|------------|
//! | `gamma`, `ln_gamma` | Lanczos approximation (g = 5, 7 coefficients), reflection for z < 0.5 |
//! | `zeta` | direct series, 10⁶ terms, Euler–Maclaurin tail |
//! | `gl_weights` | ω₀ = 1, ω_k = ω_{k−1}(1 − (α+1)/k) — coefficients of (1−z)^α |
//! | `rl_kernels` | ψ₀ = 1, ψ_k = ψ_{k−1}(k−1+α)/k — coefficients of (1−z)^{−α} |
//!
//! plus compensated (Kahan–Babuška) summation used wherever long sums feed
//! into tolerances.

mod gamma;
mod kahan;
mod stabilization;
mod weights;
mod zeta;

pub use gamma::{gamma, ln_gamma};
pub use kahan::{kahan_sum, KahanSum};
pub use stabilization::{stabilization_constants, StabilizationConstants};
pub use weights::{
    gl_partial_sum_closed_form, gl_weight_asymptotic, gl_weight_gamma_ratio, gl_weights,
    rl_kernel_gamma_ratio, rl_kernels,
};
pub use zeta::zeta;

use crate::error::{Error, Result};

/// Shared domain check: fractional orders live strictly inside (0, 1).
pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && 0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "fractional order alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}
