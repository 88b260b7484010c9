//! Centered quadratic forms of the tridiagonal models, their energy
//! comparisons, summation by parts and the test vectors used for the
//! lower-bound arguments.
//!
//! Indices in the documentation are 1-based to match the usual way these
//! forms are written; slices are 0-based, so `v[k - 1]` holds `v_k`.

mod calibrate;
mod hermite;
mod laguerre;
mod parts;
mod vectors;

pub(crate) use calibrate::trial_vector;
pub use calibrate::{
    calibrate_sandwich, lambda_appraisal_constant, SandwichConfig, SandwichKind, SandwichResult,
};
pub use hermite::{energy_i, energy_j, hermite_form, hermite_form_c, hermite_mean_offdiag};
pub use laguerre::{
    laguerre_form, laguerre_form_c, laguerre_form_prime, laguerre_lambda, laguerre_noise, u_noise,
    u_noise_groupings, LaguerreNoise,
};
pub use parts::{delta_m, sum_by_parts};
pub use vectors::{test_vector_left_hermite, test_vector_left_laguerre, test_vector_right_hermite};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VectorStats {
    /// sum v_k^2
    pub norm2_sq: f64,
    /// sum v_k^4
    pub norm4_4: f64,
    /// sum_{k=0}^{n} (v_{k+1} - v_k)^2 with v_0 = v_{n+1} = 0
    pub grad_sq: f64,
    /// sum k v_k^2
    pub kweight: f64,
}

pub fn vector_stats(v: &[f64]) -> VectorStats {
    let mut s = VectorStats::default();
    let mut prev = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let x2 = x * x;
        s.norm2_sq += x2;
        s.norm4_4 += x2 * x2;
        s.kweight += (i + 1) as f64 * x2;
        s.grad_sq += (x - prev) * (x - prev);
        prev = x;
    }
    s.grad_sq += prev * prev;
    s
}

/// Energy `sqrt(n) grad_sq + kweight / sqrt(n)` shared by the `c`-forms.
pub(crate) fn energy(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let s = vector_stats(v);
    n.sqrt() * s.grad_sq + s.kweight / n.sqrt()
}

pub(crate) fn check_len(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::Dimension {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

pub(crate) fn check_c(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Parameter(format!(
            "c must be finite and > 0, got {c}"
        )));
    }
    Ok(())
}
