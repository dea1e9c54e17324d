// Reference constants are written to full precision on purpose; the frozen
// digits are the test oracle even where f64 rounds them or a std constant
// happens to share the value (2/√π, √2, …).
#![allow(clippy::excessive_precision, clippy::approx_constant)]

//! Fractional policy gradient training library.
//!
//! Layered bottom-up:
//!
//! - [`frac_math`] — Grünwald–Letnikov weights, Riemann–Liouville kernels,
//!   gamma/zeta, compensated summation;
//! - [`frac_td`] — fractional temporal-difference errors: exact convolution,
//!   FIR truncation, and a constant-memory recursive estimator with adaptive
//!   clipping, plus a fidelity/timing report over random (δ) sequences;
//! - [`envs`] — native CartPole, MountainCarContinuous and Pendulum;
//! - [`policy`] — one-hidden-layer tanh networks over flat parameter vectors
//!   with analytic score and value gradients;
//! - [`trainer`] — the fractional actor-critic training loop (per-step online
//!   updates, episode-end importance-weighted minibatch replay) and the
//!   REINFORCE / A2C / PPO-lite baselines;
//! - [`bench`] — multi-seed suites, Welch tests, variance-decay fits, CSV
//!   artifacts;
//! - [`rng`] — the single deterministic PRNG behind every random draw.
//!
//! With the default `parallel` feature, independent benchmark cells run on a
//! rayon pool; disabling it falls back to sequential loops with bit-identical
//! results.

pub mod bench;
pub mod envs;
pub mod error;
pub mod frac_math;
pub mod frac_td;
pub mod policy;
pub mod rng;
pub mod trainer;

pub mod par;

pub use error::{Error, Result};
