//! Checks of the moment generating function bounds for chi variables and
//! the Laguerre noise terms, by closed forms, quadrature and Monte Carlo.

mod quad;

use crate::ensembles::{laguerre_chi_param, laguerre_chitilde_param, LaguerreParams};
use crate::randkit::{chi_moment, chi_unchecked, log_gamma, mean_chi, mean_chi_pos, RngStream};
use crate::{Error, Result};

/// Largest |lambda| accepted by [`chi_mgf_quadrature`].
pub const MGF_LAMBDA_LIMIT: f64 = 50.0;
/// [`u_subgaussian_profile`] accepts `|lambda| <= U_LAMBDA_FRACTION * sqrt(beta kappa)`.
pub const U_LAMBDA_FRACTION: f64 = 0.25;
/// Monte Carlo checks pass when `lhs <= rhs + MC_SIGMAS * se`.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    ClosedForm,
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed-form",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseTerm {
    Z,
    ZTilde,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamPoint {
    Chi {
        r: f64,
        lambda: f64,
    },
    ChiPair {
        r1: f64,
        r2: f64,
        lambda: f64,
    },
    Noise {
        kappa: f64,
        n: usize,
        beta: f64,
        k: usize,
        term: NoiseTerm,
        lambda: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub point: ParamPoint,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`
    pub violation: f64,
    pub method: Method,
    /// Monte Carlo standard error of `lhs`; zero otherwise.
    pub se: f64,
}

impl BoundReport {
    fn exact(point: ParamPoint, lhs: f64, rhs: f64, method: Method) -> Self {
        BoundReport {
            point,
            lhs,
            rhs,
            violation: lhs - rhs,
            method,
            se: 0.0,
        }
    }

    /// Deterministic reports pass when `violation <= tol * max(1, |rhs|)`;
    /// Monte Carlo reports when `violation <= 4 se`.
    pub fn passes(&self, tol: f64) -> bool {
        match self.method {
            Method::MonteCarlo => self.violation <= MC_SIGMAS * self.se,
            _ => self.violation <= tol * self.rhs.abs().max(1.0),
        }
    }
}

/// `E[exp(lambda chi_r)]` by adaptive quadrature of the chi density
/// `c_r x^{r-1} e^{-x^2/2}` over `[0, E chi_r + 12 + 2|lambda|]`.
///
/// Past the cut the tilted density is below `exp(-72)` relative to its
/// peak, far under the quadrature tolerance.
pub fn chi_mgf_quadrature(r: f64, lambda: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::Parameter(format!(
            "chi mgf quadrature needs r >= 1, got {r}"
        )));
    }
    if !lambda.is_finite() || lambda.abs() > MGF_LAMBDA_LIMIT {
        return Err(Error::Divergence(format!(
            "|lambda| = {} exceeds the quadrature guard {MGF_LAMBDA_LIMIT}",
            lambda.abs()
        )));
    }
    let log_c = -((0.5 * r - 1.0) * std::f64::consts::LN_2 + log_gamma(0.5 * r)?);
    let upper = mean_chi(r)? + 12.0 + 2.0 * lambda.abs();
    let f = |x: f64| {
        if x <= 0.0 {
            return if r == 1.0 { log_c.exp() } else { 0.0 };
        }
        (log_c + (r - 1.0) * x.ln() - 0.5 * x * x + lambda * x).exp()
    };
    Ok(quad::integrate(f, 0.0, upper, 1e-13))
}

/// `E e^{lambda chi} <= exp(lambda E chi + lambda^2 / 2)` on a grid of `r >= 1`.
pub fn verify_chi_mgf_bound(r_grid: &[f64], lambda_grid: &[f64]) -> Result<Vec<BoundReport>> {
    let mut out = Vec::with_capacity(r_grid.len() * lambda_grid.len());
    for &r in r_grid {
        for &lambda in lambda_grid {
            let lhs = chi_mgf_quadrature(r, lambda)?;
            let rhs = (lambda * mean_chi(r)? + 0.5 * lambda * lambda).exp();
            out.push(BoundReport::exact(
                ParamPoint::Chi { r, lambda },
                lhs,
                rhs,
                Method::Quadrature,
            ));
        }
    }
    Ok(out)
}

/// `E[exp(lambda chi_r^2)] = (1 - 2 lambda)^{-r/2}` for `lambda < 1/2`.
pub fn chi_square_mgf(r: f64, lambda: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("r must be finite and > 0, got {r}")));
    }
    if !(lambda < 0.5) {
        return Err(Error::Divergence(format!(
            "chi-square mgf diverges for lambda >= 1/2, got {lambda}"
        )));
    }
    Ok((-0.5 * r * (-2.0 * lambda).ln_1p()).exp())
}

/// `E[exp(lambda chi_r^2)] <= exp(r (lambda + 2 lambda^2))` for `lambda <= 1/4`.
pub fn verify_chi_square_mgf_bound(
    r_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    let mut out = Vec::with_capacity(r_grid.len() * lambda_grid.len());
    for &r in r_grid {
        for &lambda in lambda_grid {
            if lambda > 0.25 {
                return Err(Error::Parameter(format!(
                    "lambda must be <= 1/4, got {lambda}"
                )));
            }
            let lhs = chi_square_mgf(r, lambda)?;
            let rhs = (r * (lambda + 2.0 * lambda * lambda)).exp();
            out.push(BoundReport::exact(
                ParamPoint::Chi { r, lambda },
                lhs,
                rhs,
                Method::ClosedForm,
            ));
        }
    }
    Ok(out)
}

/// Mean and standard error of `exp(lambda x_i)` over the draws.
fn mc_mgf(mut draw: impl FnMut() -> f64, lambda: f64, samples: usize) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::Precision(
            "Monte Carlo mgf needs at least 2 samples".into(),
        ));
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..samples {
        let e = (lambda * draw()).exp();
        let d = e - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (e - mean);
    }
    let var = m2 / (samples - 1) as f64;
    Ok((mean, (var / samples as f64).sqrt()))
}

/// Right side of the product bound
/// `(1 - l^2)^{-1/2} exp(l^2 [(E chi)^2 + (E chi~)^2 + 2 l E chi E chi~] / (2 (1 - l^2)))`.
pub fn chi_product_mgf_rhs(r1: f64, r2: f64, lambda: f64) -> Result<f64> {
    let (m1, m2) = (mean_chi(r1)?, mean_chi(r2)?);
    let l2 = lambda * lambda;
    let q = m1 * m1 + m2 * m2 + 2.0 * lambda * m1 * m2;
    Ok((1.0 - l2).powf(-0.5) * (l2 * q / (2.0 * (1.0 - l2))).exp())
}

/// Monte Carlo check of the centered product mgf bound for independent
/// `chi_{r1}, chi_{r2}` with `r1, r2 >= 1` and `|lambda| < 1`.
pub fn verify_chi_product_mgf_bound(
    r1: f64,
    r2: f64,
    lambda: f64,
    samples: usize,
    stream: &mut RngStream,
) -> Result<BoundReport> {
    if !(lambda.abs() < 1.0) {
        return Err(Error::Parameter(format!("need |lambda| < 1, got {lambda}")));
    }
    if !(r1 >= 1.0 && r2 >= 1.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::Parameter(format!(
            "chi parameters must be >= 1, got ({r1}, {r2})"
        )));
    }
    let centre = mean_chi(r1)? * mean_chi(r2)?;
    let rhs = chi_product_mgf_rhs(r1, r2, lambda)?;
    let point = ParamPoint::ChiPair { r1, r2, lambda };
    if lambda == 0.0 {
        return Ok(BoundReport::exact(point, 1.0, rhs, Method::MonteCarlo));
    }
    let (lhs, se) = mc_mgf(
        || chi_unchecked(stream, r1) * chi_unchecked(stream, r2) - centre,
        lambda,
        samples,
    )?;
    Ok(BoundReport {
        point,
        lhs,
        rhs,
        violation: lhs - rhs,
        method: Method::MonteCarlo,
        se,
    })
}

fn check_index(p: &LaguerreParams, k: usize) -> Result<()> {
    if k < 1 || k > p.n() {
        return Err(Error::Parameter(format!(
            "k must lie in 1..={}, got {k}",
            p.n()
        )));
    }
    Ok(())
}

/// Monte Carlo mgfs of `Z_k`, `Z~_k` (against `e^{2 l^2}`, `l <= sqrt(beta kappa)/4`)
/// and `Y_k` (against `2 e^{12 l^2}`, `|l| <= sqrt(beta kappa) / (2 sqrt 2)`).
///
/// `Y_k` is reported only for `k < n`; `Z~_k` uses `chi~_{beta(n-k+1)}`.
pub fn verify_zy_bounds(
    kappa: f64,
    n: usize,
    beta: f64,
    k: usize,
    lambda_grid: &[f64],
    samples: usize,
    stream: &mut RngStream,
) -> Result<Vec<BoundReport>> {
    let p = LaguerreParams::new(n, kappa, beta)?;
    check_index(&p, k)?;
    let sbk = (beta * kappa).sqrt();
    for &l in lambda_grid {
        if !(l <= sbk / 4.0) || !(l.abs() <= sbk / (2.0 * 2f64.sqrt())) {
            return Err(Error::Parameter(format!(
                "lambda = {l} outside the validity range for sqrt(beta kappa) = {sbk}"
            )));
        }
    }
    let r_z = laguerre_chi_param(kappa, beta, k - 1);
    let r_zt = beta * (n - k + 1) as f64;
    let r_y = if k < n {
        Some(laguerre_chitilde_param(n, beta, k - 1))
    } else {
        None
    };
    let mut out = Vec::new();
    for &lambda in lambda_grid {
        let mut terms = vec![(NoiseTerm::Z, r_z), (NoiseTerm::ZTilde, r_zt)];
        if r_y.is_some() {
            terms.push((NoiseTerm::Y, 0.0));
        }
        for (term, r) in terms {
            let (lhs, se, rhs) = match term {
                NoiseTerm::Y => {
                    let r2 = r_y.unwrap();
                    let centre = mean_chi_pos(r_z) * mean_chi_pos(r2);
                    let (m, se) = mc_mgf(
                        || (chi_unchecked(stream, r_z) * chi_unchecked(stream, r2) - centre) / sbk,
                        lambda,
                        samples,
                    )?;
                    (m, se, 2.0 * (12.0 * lambda * lambda).exp())
                }
                _ => {
                    let (m, se) = mc_mgf(
                        || {
                            let c = chi_unchecked(stream, r);
                            (c * c - r) / sbk
                        },
                        lambda,
                        samples,
                    )?;
                    (m, se, (2.0 * lambda * lambda).exp())
                }
            };
            out.push(BoundReport {
                point: ParamPoint::Noise {
                    kappa,
                    n,
                    beta,
                    k,
                    term,
                    lambda,
                },
                lhs,
                rhs,
                violation: lhs - rhs,
                method: Method::MonteCarlo,
                se,
            });
        }
    }
    Ok(out)
}

/// Exact `E[exp(lambda Z)]` for `Z = (chi_r^2 - r) / s`:
/// `(1 - 2 lambda / s)^{-r/2} exp(-lambda r / s)`.
pub fn z_mgf_exact(r: f64, s: f64, lambda: f64) -> Result<f64> {
    let mu = lambda / s;
    Ok(chi_square_mgf(r, mu)? * (-mu * r).exp())
}

/// Exact `Var(U_k)` from chi moments up to order four.
pub fn u_variance(p: &LaguerreParams, k: usize) -> Result<f64> {
    check_index(p, k)?;
    let (n, kappa, beta) = (p.n(), p.kappa(), p.beta());
    let ra = laguerre_chi_param(kappa, beta, k - 1);
    let a: Vec<f64> = (1..=4).map(|j| chi_moment(ra, j)).collect::<Result<_>>()?;
    let b: Vec<f64> = if k < n {
        let rb = laguerre_chitilde_param(n, beta, k - 1);
        (1..=4).map(|j| chi_moment(rb, j)).collect::<Result<_>>()?
    } else {
        vec![0.0; 4]
    };
    // moments of D = a - b
    let d2 = a[1] - 2.0 * a[0] * b[0] + b[1];
    let d4 = a[3] - 4.0 * a[2] * b[0] + 6.0 * a[1] * b[1] - 4.0 * a[0] * b[2] + b[3];
    Ok((d4 - d2 * d2) / (beta * kappa))
}

#[derive(Clone, Debug, PartialEq)]
pub struct UProfile {
    /// Empirical `Var(U_k)`.
    pub sigma_sq: f64,
    /// `(lambda, log E[e^{lambda U_k}] / lambda^2)` per grid point.
    pub points: Vec<(f64, f64)>,
}

impl UProfile {
    /// `max_lambda (log-mgf / lambda^2) / sigma^2`.
    pub fn envelope(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.1 / self.sigma_sq)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Empirical sub-Gaussian profile of `U_k`: one batch of draws, reused for
/// every `lambda` on the grid.
pub fn u_subgaussian_profile(
    kappa: f64,
    n: usize,
    beta: f64,
    k: usize,
    lambda_grid: &[f64],
    samples: usize,
    stream: &mut RngStream,
) -> Result<UProfile> {
    let p = LaguerreParams::new(n, kappa, beta)?;
    check_index(&p, k)?;
    if samples < 2 {
        return Err(Error::Precision("profile needs at least 2 samples".into()));
    }
    let sbk = (beta * kappa).sqrt();
    for &l in lambda_grid {
        if l == 0.0 || !(l.abs() <= U_LAMBDA_FRACTION * sbk) {
            return Err(Error::Parameter(format!(
                "lambda = {l} must be nonzero with |lambda| <= {} sqrt(beta kappa)",
                U_LAMBDA_FRACTION
            )));
        }
    }
    let ra = laguerre_chi_param(kappa, beta, k - 1);
    let (rb, prod) = if k < n {
        let rb = laguerre_chitilde_param(n, beta, k - 1);
        (rb, mean_chi_pos(ra) * mean_chi_pos(rb))
    } else {
        (0.0, 0.0)
    };
    let centre = ra + rb - 2.0 * prod;
    let u: Vec<f64> = (0..samples)
        .map(|_| {
            let a = chi_unchecked(stream, ra);
            let b = if rb > 0.0 {
                chi_unchecked(stream, rb)
            } else {
                0.0
            };
            ((a - b).powi(2) - centre) / sbk
        })
        .collect();
    let mean = u.iter().sum::<f64>() / samples as f64;
    let sigma_sq = u.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let points = lambda_grid
        .iter()
        .map(|&l| {
            let m = u.iter().map(|x| (l * x).exp()).sum::<f64>() / samples as f64;
            (l, m.ln() / (l * l))
        })
        .collect();
    Ok(UProfile { sigma_sq, points })
}

/// Smallest `C` with `Var(U_k) <= C alpha^2` for all `k <= n/2` over the grid,
/// `alpha = 1 - sqrt(n / kappa)`.
pub fn sigma_appraisal_constant(
    n_grid: &[usize],
    kappa_ratios: &[f64],
    beta_grid: &[f64],
) -> Result<f64> {
    let mut c = 0.0f64;
    for &n in n_grid {
        for &ratio in kappa_ratios {
            for &beta in beta_grid {
                let kappa = ratio * n as f64;
                let p = LaguerreParams::new(n, kappa, beta)?;
                let alpha = 1.0 - (n as f64 / kappa).sqrt();
                for k in 1..=(n / 2) {
                    c = c.max(u_variance(&p, k)? / (alpha * alpha));
                }
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mgf_normalisation() {
        for &r in &[1.0, 1.5, 2.0, 5.0, 20.0, 300.0] {
            let v = chi_mgf_quadrature(r, 0.0).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "r = {r}: {v}");
        }
    }

    #[test]
    fn mgf_of_abs_gaussian() {
        // E e^{|g|} = 2 e^{1/2} Phi(1)
        let v = chi_mgf_quadrature(1.0, 1.0).unwrap();
        assert!((v - 2.774_285_957_670_009_5).abs() < 1e-9 * v);
    }

    #[test]
    fn mgf_guards() {
        assert!(matches!(
            chi_mgf_quadrature(2.0, 51.0),
            Err(Error::Divergence(_))
        ));
        assert!(chi_mgf_quadrature(0.5, 1.0).is_err());
        let v = chi_mgf_quadrature(5.0, -3.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn chi_square_mgf_values() {
        assert_eq!(chi_square_mgf(3.0, 0.0).unwrap(), 1.0);
        assert!((chi_square_mgf(2.0, 0.25).unwrap() - 2.0).abs() < 1e-15);
        assert!((chi_square_mgf(1.0, -1.0).unwrap() - 3f64.powf(-0.5)).abs() < 1e-15);
        assert!(matches!(
            chi_square_mgf(1.0, 0.5),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn chi_square_mgf_edge_point() {
        let r = verify_chi_square_mgf_bound(&[1.0], &[0.25]).unwrap()[0];
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.rhs - 0.375f64.exp()).abs() < 1e-15);
        assert!(r.passes(1e-12));
    }

    #[test]
    fn chi_product_mgf_trivial_lambda() {
        let mut st = RngStream::new(1, 0);
        let r = verify_chi_product_mgf_bound(2.0, 3.0, 0.0, 10, &mut st).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!(r.rhs >= 1.0 && r.passes(0.0));
        assert!(verify_chi_product_mgf_bound(2.0, 3.0, 1.0, 10, &mut st).is_err());
    }

    #[test]
    fn z_exact_mgf_matches_small_mc() {
        let mut st = RngStream::new(4, 4);
        let reps = verify_zy_bounds(100.0, 50, 2.0, 10, &[0.5], 50_000, &mut st).unwrap();
        let z = reps[0];
        let exact = z_mgf_exact(2.0 * 91.0, 200f64.sqrt(), 0.5).unwrap();
        assert!((z.lhs - exact).abs() < 4.0 * z.se, "{} vs {exact}", z.lhs);
    }

    #[test]
    fn u_variance_last_index_is_chi_square() {
        // U_n = Z_n, Var = 2 r / (beta kappa)
        let p = LaguerreParams::new(4, 10.0, 2.0).unwrap();
        let r = 2.0 * 7.0;
        assert!((u_variance(&p, 4).unwrap() - 2.0 * r / 20.0).abs() < 1e-12);
    }

    #[test]
    fn zy_range_guard() {
        let mut st = RngStream::new(1, 0);
        assert!(verify_zy_bounds(100.0, 50, 2.0, 10, &[4.0], 10, &mut st).is_err());
        assert!(verify_zy_bounds(100.0, 50, 2.0, 0, &[0.1], 10, &mut st).is_err());
    }
}
