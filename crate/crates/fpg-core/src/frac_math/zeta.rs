//! Riemann zeta for real s > 1: direct summation with an Euler–Maclaurin tail.
//!
//! ζ(s) ≈ Σ_{n=1}^{N} n^{−s} + N^{1−s}/(s−1) − N^{−s}/2 + s·N^{−s−1}/12
//!
//! with N = 10⁶ and the partial sum compensated. The first omitted
//! Euler–Maclaurin term is O(s³·N^{−s−3}) < 10⁻¹⁸ for s ≥ 1.1, so the
//! absolute error is below 10⁻¹⁰ on the whole range the stabilization
//! constants need (s = 1 + α, α ∈ (0, 1); accuracy degrades gracefully as
//! s ↓ 1 where the function itself blows up).

use super::kahan::KahanSum;
use crate::error::{Error, Result};

const N_TERMS: usize = 1_000_000;

pub fn zeta(s: f64) -> Result<f64> {
    if !s.is_finite() || s <= 1.0 {
        return Err(Error::Domain(format!("zeta requires s > 1, got {s}")));
    }
    let mut acc = KahanSum::new();
    for n in 1..=N_TERMS {
        acc.add((n as f64).powf(-s));
    }
    let nf = N_TERMS as f64;
    let tail = nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s * nf.powf(-s - 1.0) / 12.0;
    Ok(acc.value() + tail)
}
