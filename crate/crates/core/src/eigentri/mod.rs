//! Extremal eigenvalues of symmetric tridiagonal matrices.
//!
//! The fast path is Sturm-sequence bisection: one O(n) pass of the LDL^T
//! pivot recurrence counts the eigenvalues below a shift, and bisection on
//! that count pins down `lambda_max` or `lambda_min` to any tolerance. A
//! cyclic Jacobi solver on the densified matrix serves as an independent
//! oracle for small n.

mod jacobi;

pub use jacobi::{dense_eigen_oracle, DENSE_ORACLE_MAX_N};

use crate::ensembles::SymTridiagonal;
use crate::{Error, Result};

/// Relative size of the pivot that replaces an exactly vanishing one.
const PIVOT_TINY: f64 = f64::EPSILON * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenResult {
    pub value: f64,
    pub iterations: u32,
    pub bracket_width: f64,
}

/// Bisection tolerance used when the caller does not supply one:
/// `1e-10 * max(1, spectral radius bound)`.
pub fn default_tol(t: &SymTridiagonal) -> f64 {
    let (lo, hi) = t.gershgorin();
    1e-10 * lo.abs().max(hi.abs()).max(1.0)
}

pub(crate) fn pivot_floor(t: &SymTridiagonal) -> f64 {
    PIVOT_TINY * t.norm().max(f64::MIN_POSITIVE)
}

/// Number of eigenvalues of `t` strictly below `x`.
pub fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
    sturm_count_raw(t.diag(), t.offdiag(), x, pivot_floor(t))
}

/// Pivot recurrence `q_i = (d_i - x) - e_{i-1}^2 / q_{i-1}`; the count of
/// negative pivots equals the number of eigenvalues below `x`. A pivot with
/// `|q| < pivmin` is replaced by `±pivmin` keeping its sign, with an exact
/// zero treated as positive so that an eigenvalue equal to `x` is not
/// counted as strictly below it.
#[inline]
pub(crate) fn sturm_count_raw(diag: &[f64], offdiag: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0usize;
    let mut q = guard(diag[0] - x, pivmin);
    count += (q < 0.0) as usize;
    for (d, e) in diag[1..].iter().zip(offdiag) {
        q = guard((d - x) - e * e / q, pivmin);
        count += (q < 0.0) as usize;
    }
    count
}

#[inline(always)]
fn guard(q: f64, pivmin: f64) -> f64 {
    if q.abs() < pivmin {
        if q < 0.0 {
            -pivmin
        } else {
            pivmin
        }
    } else {
        q
    }
}

fn check(t: &SymTridiagonal, tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be finite and > 0, got {tol}"
        )));
    }
    if t.diag()
        .iter()
        .chain(t.offdiag().iter())
        .any(|x| !x.is_finite())
    {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Edge {
    Max,
    Min,
}

fn bisect(t: &SymTridiagonal, tol: f64, edge: Edge) -> Result<EigenResult> {
    check(t, tol)?;
    let n = t.n();
    let pivmin = pivot_floor(t);
    let (mut lo, mut hi) = t.gershgorin();
    // Pad so the Gershgorin endpoints themselves are never ambiguous.
    let pad = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) + pivmin;
    lo -= pad;
    hi += pad;
    let mut iterations = 0u32;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let c = sturm_count_raw(t.diag(), t.offdiag(), mid, pivmin);
        let below = match edge {
            // all eigenvalues below mid => lambda_max < mid
            Edge::Max => c == n,
            // at least one below mid => lambda_min < mid
            Edge::Min => c >= 1,
        };
        if below {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(EigenResult {
        value: 0.5 * (lo + hi),
        iterations,
        bracket_width: hi - lo,
    })
}

/// Largest eigenvalue to within `tol` (absolute).
pub fn lambda_max(t: &SymTridiagonal, tol: f64) -> Result<EigenResult> {
    bisect(t, tol, Edge::Max)
}

/// Smallest eigenvalue to within `tol` (absolute).
pub fn lambda_min(t: &SymTridiagonal, tol: f64) -> Result<EigenResult> {
    bisect(t, tol, Edge::Min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[f64], e: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_count(&t(&[1.0, 2.0, 3.0], &[0.0, 0.0]), 2.5), 2);
        assert_eq!(sturm_count(&t(&[2.0, 2.0], &[1.0]), 2.0), 1);
        assert_eq!(sturm_count(&t(&[2.0, 2.0], &[1.0]), 0.5), 0);
        assert_eq!(sturm_count(&t(&[2.0, 2.0], &[1.0]), 3.5), 2);
    }

    #[test]
    fn sturm_exact_ties_are_not_counted() {
        // eigenvalue exactly at the query point is not strictly below it
        assert_eq!(sturm_count(&t(&[1.0, 2.0, 3.0], &[0.0, 0.0]), 2.0), 1);
        assert_eq!(sturm_count(&t(&[1.0, 2.0, 3.0], &[0.0, 0.0]), 1.0), 0);
        assert_eq!(sturm_count(&t(&[0.0, 0.0, 0.0], &[1.0, 1.0]), 0.0), 1);
    }

    #[test]
    fn extremal_examples() {
        let tol = 1e-12;
        let d = t(&[1.0, 2.0, 3.0], &[0.0, 0.0]);
        assert!((lambda_max(&d, tol).unwrap().value - 3.0).abs() <= tol);
        assert!((lambda_min(&d, tol).unwrap().value - 1.0).abs() <= tol);
        let a = t(&[2.0, 2.0], &[1.0]);
        assert!((lambda_max(&a, tol).unwrap().value - 3.0).abs() <= tol);
        assert!((lambda_min(&a, tol).unwrap().value - 1.0).abs() <= tol);
        let lap = t(&[0.0, 0.0, 0.0], &[1.0, 1.0]);
        let s2 = std::f64::consts::SQRT_2;
        assert!((lambda_max(&lap, tol).unwrap().value - s2).abs() <= tol);
        assert!((lambda_min(&lap, tol).unwrap().value + s2).abs() <= tol);
    }

    #[test]
    fn result_bookkeeping() {
        let a = t(&[2.0, 2.0], &[1.0]);
        let r = lambda_max(&a, 1e-8).unwrap();
        assert!(r.bracket_width <= 1e-8);
        assert!(r.iterations > 0);
        let one = t(&[4.5], &[]);
        let r = lambda_max(&one, 1e-12).unwrap();
        assert!((r.value - 4.5).abs() <= 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let a = t(&[2.0, 2.0], &[1.0]);
        assert!(lambda_max(&a, 0.0).is_err());
        assert!(lambda_min(&a, f64::NAN).is_err());
    }

    #[test]
    fn default_tol_scales_with_spectrum() {
        assert_eq!(default_tol(&t(&[0.1], &[])), 1e-10);
        let big = t(&[1e4, 0.0], &[0.0]);
        assert!((default_tol(&big) - 1e-6).abs() < 1e-18);
    }
}
