//! Sampling and analysis of the tridiagonal beta-Hermite and beta-Laguerre
//! matrix models.
//!
//! The crate is organised bottom-up:
//!
//! * [`randkit`]: counter-based random streams, Gaussian/gamma/chi variates
//!   and the log-gamma function used for exact chi moments.
//! * [`ensembles`]: the tridiagonal Hermite model and the bidiagonal
//!   Laguerre model, keeping the raw noise alongside the matrix.
//! * [`eigentri`]: Sturm-sequence bisection for extremal eigenvalues plus a
//!   dense Jacobi oracle.
//! * [`forms`]: the centred quadratic forms, their energy-penalised
//!   variants, summation by parts and the explicit test vectors.
//! * [`boundscheck`]: moment generating function bounds for chi variables
//!   checked by closed form, quadrature and Monte Carlo.
//! * [`experiments`]: deterministic-parallel Monte Carlo estimates of tail
//!   probabilities, variances and exponent fits.
//! * [`cli`]: the `betatri` command line front end.

// `!(x < y)` is used on purpose so that NaN fails validation; quadrature
// and series constants keep their reference digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod boundscheck;
pub mod cli;
pub mod eigentri;
pub mod ensembles;
mod error;
pub mod experiments;
pub mod forms;
pub mod randkit;

pub use error::{Error, Result};
