//! Randomized and grid checks behind `betatri verify`.

use crate::boundscheck::{
    verify_chi_mgf_bound, verify_chi_product_mgf_bound, verify_chi_square_mgf_bound,
    verify_zy_bounds,
};
use crate::eigentri::{dense_eigen_oracle, lambda_max, lambda_min};
use crate::ensembles::{
    laguerre_matrix, sample_hermite, sample_laguerre, HermiteParams, LaguerreParams,
};
use crate::forms::{
    energy_i, energy_j, hermite_form, hermite_form_c, laguerre_form, sum_by_parts,
    test_vector_left_hermite, test_vector_left_laguerre, test_vector_right_hermite,
    u_noise_groupings, vector_stats,
};
use crate::randkit::{chi_mean_deficit, mean_chi, RngStream};
use crate::Result;

/// Outcome of one family of checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub trials: u64,
    pub violations: u64,
    /// Largest absolute excess over the bound (or `|lhs - rhs|` for identities).
    pub max_abs_violation: f64,
    /// Largest excess relative to the check's scale.
    pub max_rel_violation: f64,
    /// Tolerance applied to the relative excess.
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Check {
            name,
            trials: 0,
            violations: 0,
            max_abs_violation: 0.0,
            max_rel_violation: 0.0,
            tolerance,
        }
    }

    /// Records `lhs <= rhs` with scale `max(1, |rhs|)`.
    fn le(&mut self, lhs: f64, rhs: f64) {
        let abs = (lhs - rhs).max(0.0);
        self.record(abs, abs / rhs.abs().max(1.0));
    }

    /// Records `a == b` with scale `max(1, |a|)`.
    fn same(&mut self, a: f64, b: f64) {
        let abs = (a - b).abs();
        self.record(abs, abs / a.abs().max(1.0));
    }

    fn record(&mut self, abs: f64, rel: f64) {
        self.trials += 1;
        if !(rel <= self.tolerance) {
            self.violations += 1;
        }
        self.max_abs_violation = self.max_abs_violation.max(abs);
        self.max_rel_violation = self.max_rel_violation.max(rel);
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

fn below(st: &mut RngStream, n: usize) -> usize {
    ((st.uniform() * n as f64) as usize).min(n - 1)
}

fn gaussian_vec(st: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| st.standard_normal()).collect()
}

const BETAS: [f64; 3] = [1.0, 2.0, 4.0];

/// Windowed summation by parts on random `(s, t, m)` with `n <= 100`.
pub fn parts(trials: u64, seed: u64) -> Result<Vec<Check>> {
    let mut c = Check::new("sum-by-parts", 1e-12);
    for i in 0..trials {
        let mut st = RngStream::new(seed, i);
        let n = 1 + below(&mut st, 100);
        let m = 1 + below(&mut st, n);
        let s = gaussian_vec(&mut st, n);
        let t = gaussian_vec(&mut st, n);
        let (lhs, rhs) = sum_by_parts(&s, &t, m)?;
        c.same(lhs, rhs);
    }
    Ok(vec![c])
}

/// Energy comparisons, the Hermite sandwich and form/matrix consistency.
pub fn forms(trials: u64, seed: u64) -> Result<Vec<Check>> {
    let mut j_up = Check::new("energy-j-le-8i", 1e-12);
    let mut j_lo = Check::new("energy-j-ge-i/16", 1e-12);
    let mut lower = Check::new("hermite-sandwich-lower", 1e-9);
    let mut upper = Check::new("hermite-sandwich-upper", 1e-9);
    let mut h_mat = Check::new("hermite-form-matches-matrix", 1e-12);
    let mut l_mat = Check::new("laguerre-form-matches-matrix", 1e-12);
    let mut u_grp = Check::new("u-noise-regrouping", 1e-12);
    for i in 0..trials {
        let mut st = RngStream::new(seed, i);
        let beta = BETAS[below(&mut st, 3)];

        let n = 2 + below(&mut st, 499);
        let v = gaussian_vec(&mut st, n);
        let (ei, ej) = (energy_i(&v, n)?, energy_j(&v, n, beta)?);
        j_up.le(ej, 8.0 * ei);
        j_lo.le(ei / 16.0, ej);

        let n = 1 + below(&mut st, 200);
        let s = sample_hermite(HermiteParams::new(n, beta)?, &mut st);
        let v = crate::forms::trial_vector(&mut st, n, i as usize);
        let f = hermite_form(&s, &v)?;
        let (f8, f16) = (
            hermite_form_c(&s, &v, 8.0)?,
            hermite_form_c(&s, &v, 1.0 / 16.0)?,
        );
        let scale = 1.0 + f.abs();
        lower.le(f8 / scale, f / scale);
        upper.le(f / scale, f16 / scale);
        let t = s.matrix();
        h_mat.same(
            f,
            t.quadratic_form(&v)? - 2.0 * (n as f64).sqrt() * v.iter().map(|x| x * x).sum::<f64>(),
        );

        let n = 1 + below(&mut st, 100);
        let kappa = n as f64 - 1.0 + 0.5 + 4.0 * n as f64 * st.uniform();
        let s = sample_laguerre(LaguerreParams::new(n, kappa, beta)?, &mut st);
        let v = gaussian_vec(&mut st, n);
        let norm: f64 = v.iter().map(|x| x * x).sum();
        let edge = (kappa.sqrt() + (n as f64).sqrt()).powi(2);
        let via_matrix = (laguerre_matrix(&s).quadratic_form(&v)? - edge * norm) / kappa.sqrt();
        l_mat.same(laguerre_form(&s, &v)?, via_matrix);
        let (direct, regrouped) = u_noise_groupings(&s, &v)?;
        u_grp.same(direct, regrouped);
    }
    Ok(vec![j_up, j_lo, lower, upper, h_mat, l_mat, u_grp])
}

/// Chi mean bounds and the mgf bounds; Monte Carlo checks use `samples` draws.
pub fn mgf(samples: u64, seed: u64) -> Result<Vec<Check>> {
    let mut mean = Check::new("chi-mean-bounds", 0.0);
    for i in 0..400 {
        let r = 10f64.powf(-1.0 + 9.0 * i as f64 / 399.0);
        let m = mean_chi(r)?;
        mean.le(m, r.sqrt());
        if r >= 0.5 {
            // sqrt(r - 1/2) <= m, via the deficit sqrt(r) - m to avoid cancellation
            let gap = chi_mean_deficit(r)?;
            mean.le(gap, 0.5 / (r.sqrt() + (r - 0.5).sqrt()));
        }
    }

    let lambdas: Vec<f64> = (0..=40).map(|i| -5.0 + 0.25 * i as f64).collect();
    let mut quad = Check::new("chi-mgf-quadrature", 1e-8);
    for rep in verify_chi_mgf_bound(&[1.0, 1.5, 2.0, 5.0, 20.0, 100.0], &lambdas)? {
        quad.le(rep.lhs, rep.rhs);
    }

    let lambdas: Vec<f64> = (0..40).map(|i| -10.0 + 10.25 * i as f64 / 39.0).collect();
    let mut closed = Check::new("chi-square-mgf", 1e-12);
    for rep in verify_chi_square_mgf_bound(&[0.5, 1.0, 2.0, 10.0, 100.0], &lambdas)? {
        closed.le(rep.lhs, rep.rhs);
    }

    let mut mc = Check::new("mgf-monte-carlo", 0.0);
    let mut st = RngStream::new(seed, 0);
    for (r1, r2, l) in [(2.0, 2.0, 0.3), (1.0, 5.0, -0.5), (10.0, 3.0, 0.6)] {
        let rep = verify_chi_product_mgf_bound(r1, r2, l, samples as usize, &mut st)?;
        mc.record(rep.violation.max(0.0), mc_excess(rep.violation, rep.se));
    }
    let mut st = RngStream::new(seed, 1);
    for rep in verify_zy_bounds(
        100.0,
        50,
        2.0,
        10,
        &[-1.0, 0.5, 1.0],
        samples as usize,
        &mut st,
    )? {
        mc.record(rep.violation.max(0.0), mc_excess(rep.violation, rep.se));
    }
    Ok(vec![mean, quad, closed, mc])
}

/// Excess over the 4-SE allowance, zero when inside it.
fn mc_excess(violation: f64, se: f64) -> f64 {
    (violation - crate::boundscheck::MC_SIGMAS * se).max(0.0)
}

/// Bisection against the dense Jacobi oracle on random model matrices, `n <= 50`.
pub fn eigen(trials: u64, seed: u64) -> Result<Vec<Check>> {
    let mut c = Check::new("bisection-vs-jacobi", 1e-9);
    for i in 0..trials {
        let mut st = RngStream::new(seed, i);
        let beta = BETAS[below(&mut st, 3)];
        let n = 1 + below(&mut st, 50);
        let t = if i % 2 == 0 {
            sample_hermite(HermiteParams::new(n, beta)?, &mut st).matrix()
        } else {
            let kappa = n as f64 - 1.0 + 0.5 + 4.0 * n as f64 * st.uniform();
            sample_laguerre(LaguerreParams::new(n, kappa, beta)?, &mut st).matrix()
        };
        let eig = dense_eigen_oracle(&t)?;
        let scale = 1.0 + t.norm();
        let tol = 1e-12 * scale;
        let hi = lambda_max(&t, tol)?.value;
        let lo = lambda_min(&t, tol)?.value;
        c.record((hi - eig[n - 1]).abs(), (hi - eig[n - 1]).abs() / scale);
        c.record((lo - eig[0]).abs(), (lo - eig[0]).abs() / scale);
    }
    Ok(vec![c])
}

/// Size appraisals of the lower-bound test vectors.
pub fn vectors() -> Result<Vec<Check>> {
    // band checks: value must lie in [lo, hi] up to relative rounding slack
    fn band(c: &mut Check, x: f64, lo: f64, hi: f64) {
        let excess = (lo - x).max(x - hi).max(0.0);
        c.record(excess, excess / lo.abs().max(hi.abs()));
    }
    let mut left = Check::new("left-hermite-vector", 1e-12);
    for (n, eps) in [
        (10_000, 0.01),
        (10_000, 0.1),
        (2_000, 0.05),
        (50_000, 0.003),
    ] {
        let s = vector_stats(&test_vector_left_hermite(n, eps)?);
        let ne = n as f64 * eps;
        band(&mut left, s.norm2_sq / ne, 1.0 / 20.0, 1.0 / 6.0);
        band(&mut left, s.grad_sq * ne, 1.0, 8.0);
        band(&mut left, s.kweight / (ne * ne), 0.0, 1.0);
    }
    let mut right = Check::new("right-hermite-vector", 1e-12);
    for (n, eps) in [
        (10_000, 0.04),
        (10_000, 0.2),
        (1_000, 0.25),
        (100_000, 0.01),
    ] {
        let s = vector_stats(&test_vector_right_hermite(n, eps)?);
        let re = eps.sqrt();
        band(&mut right, s.norm2_sq * re, 1.0 / 20.0, 1.0 / 6.0);
        band(&mut right, s.kweight * eps, 1.0 / 40.0, 1.0);
    }
    let mut lag = Check::new("left-laguerre-vector", 1e-12);
    for (n, kappa, eps) in [
        (1_000, 4_000.0, 0.05),
        (2_000, 2_000.0, 0.2),
        (500, 8_000.0, 0.1),
    ] {
        let s = vector_stats(&test_vector_left_laguerre(n, kappa, eps)?);
        let w = n as f64 * eps / (n as f64 / kappa).sqrt();
        band(&mut lag, s.norm2_sq / w, 1.0 / 20.0, 1.0 / 6.0);
        band(&mut lag, s.grad_sq * w, 1.0, 8.0);
        band(&mut lag, s.kweight / (w * w), 0.0, 1.0);
    }
    Ok(vec![left, right, lag])
}
