use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of a function (e.g. `log_gamma(0)`).
    #[error("domain error: {0}")]
    Domain(String),
    /// Model or experiment parameter violates a precondition.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Malformed numerical input (non-finite entries, length mismatch).
    #[error("input error: {0}")]
    Input(String),
    /// Dimension mismatch between a vector and a sample.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    /// An O(n^3) routine was asked to run above its size guard.
    #[error("size guard: n = {n} exceeds limit {limit}")]
    Guard { n: usize, limit: usize },
    /// A moment generating function was evaluated where it diverges.
    #[error("divergence: {0}")]
    Divergence(String),
    /// Too few usable points for a regression.
    #[error("fit error: {0}")]
    Fit(String),
    /// No grid point satisfied a calibration search.
    #[error("calibration failure: {0}")]
    Calibration(String),
    /// Requested Monte Carlo budget is too small for the statistic.
    #[error("precision error: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
