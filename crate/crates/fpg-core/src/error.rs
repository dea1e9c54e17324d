//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at z = {0}")]
    GammaPole(f64),
    /// Vector/shape mismatch between caller and callee.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A NaN or infinity reached a place that requires finite values.
    #[error("non-finite value: {0}")]
    NonFinite(String),
    /// An operation that needs at least one stored transition got none.
    #[error("empty transition buffer")]
    EmptyBuffer,
    /// Too few data points for a statistic to be meaningful.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// Training produced non-finite parameters or metrics and stopped.
    #[error("numerical abort: {0}")]
    NumericalAbort(String),
    /// Invalid configuration (bad key, value, or combination).
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
