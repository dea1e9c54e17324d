//! Stabilization constants for the recursive fractional TD estimator.
//!
//! For order α ∈ (0, 1):
//!
//! - η = 1/Γ(1−α): the literal per-step input gain of the recursion;
//! - c_α = ζ(1+α)/|Γ(−α)|: slope of the adaptive clipping bound in the
//!   running max of |δ|;
//! - κ = α(1−α)/(2Γ(2−α)): coefficient of the bound's (t+1)^{−α−1} term.

use super::check_alpha;
use super::gamma::gamma;
use super::zeta::zeta;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationConstants {
    pub alpha: f64,
    pub eta: f64,
    pub c_alpha: f64,
    pub kappa: f64,
}

/// Compute all three constants for a given order.
pub fn stabilization_constants(alpha: f64) -> Result<StabilizationConstants> {
    check_alpha(alpha)?;
    Ok(StabilizationConstants {
        alpha,
        eta: 1.0 / gamma(1.0 - alpha)?,
        c_alpha: zeta(1.0 + alpha)? / gamma(-alpha)?.abs(),
        kappa: alpha * (1.0 - alpha) / (2.0 * gamma(2.0 - alpha)?),
    })
}
