use super::fit::least_squares;
use super::{
    estimate_tail_grid, for_each_matrix, Ensemble, Extremal, FitReport, Side, TailQuery,
    MIN_FIT_HITS,
};
use crate::eigentri::{default_tol, lambda_max};
use crate::{Error, Result};

/// Compensated (Neumaier) sum.
pub(crate) fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean and unbiased variance, both with compensated sums.
pub(crate) fn mean_var(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = neumaier_sum(xs.iter().copied()) / m;
    let var = neumaier_sum(xs.iter().map(|x| (x - mean).powi(2))) / (m - 1.0);
    (mean, var)
}

/// Distinct seed per matrix size so different n never share streams.
fn seed_for(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `lambda_max` of `samples` independent draws, in sample order.
fn lambda_max_draws(
    ensemble: Ensemble,
    n: usize,
    beta: f64,
    kappa: Option<f64>,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<f64>> {
    let blocks = for_each_matrix(
        ensemble,
        n,
        beta,
        kappa,
        samples,
        seed_for(seed, n),
        workers,
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<f64>>, t| {
            if let Ok(v) = acc {
                match lambda_max(t, default_tol(t)) {
                    Ok(r) => v.push(r.value),
                    Err(e) => *acc = Err(e),
                }
            }
        },
    )?;
    let mut out = Vec::with_capacity(samples as usize);
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariancePoint {
    pub n: usize,
    /// `None` for Hermite.
    pub kappa: Option<f64>,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceScan {
    pub points: Vec<VariancePoint>,
    /// Slope of `log Var` (Hermite) or `log(Var / kappa)` (Laguerre) against `log n`.
    pub fit: FitReport,
}

/// Sample variance of `lambda_max` across `n_grid`; Laguerre uses `kappa = ratio * n`.
#[allow(clippy::too_many_arguments)]
pub fn variance_scan(
    n_grid: &[usize],
    beta: f64,
    samples: u64,
    seed: u64,
    ensemble: Ensemble,
    kappa_ratio: Option<f64>,
    workers: usize,
) -> Result<VarianceScan> {
    if n_grid.len() < 3 {
        return Err(Error::Parameter(
            "variance scan needs at least 3 sizes".into(),
        ));
    }
    if n_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parameter("n grid must be ascending".into()));
    }
    if samples < 100 {
        return Err(Error::Precision(format!(
            "variance scan needs >= 100 samples, got {samples}"
        )));
    }
    match (ensemble, kappa_ratio) {
        (Ensemble::Laguerre, None) => {
            return Err(Error::Parameter("laguerre scan needs a kappa ratio".into()))
        }
        (Ensemble::Hermite, Some(_)) => {
            return Err(Error::Parameter(
                "kappa ratio applies to laguerre only".into(),
            ))
        }
        _ => {}
    }
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let kappa = kappa_ratio.map(|r| r * n as f64);
        let xs = lambda_max_draws(ensemble, n, beta, kappa, samples, seed, workers)?;
        let (mean, variance) = mean_var(&xs);
        points.push(VariancePoint {
            n,
            kappa,
            mean,
            variance,
        });
    }
    let x: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let y: Vec<f64> = points
        .iter()
        .map(|p| (p.variance / p.kappa.unwrap_or(1.0)).ln())
        .collect();
    let (slope, intercept, residual_rms) =
        least_squares(&x, &y).map_err(|_| Error::Fit("n grid has no spread".into()))?;
    Ok(VarianceScan {
        points,
        fit: FitReport {
            slope,
            intercept,
            residual_rms,
            points_used: x.len(),
            points_excluded: 0,
            expected_power: -1.0 / 3.0,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioPoint {
    pub eps: f64,
    pub hits: u64,
    pub p_hat: f64,
    /// `None` when fewer than [`MIN_FIT_HITS`] hits were seen.
    pub ratio: Option<f64>,
}

/// `-log p / (beta n eps^{3/2})` for the upper side, `-log p / (beta n^2 eps^3)` for the lower.
pub fn ratio_from_p(side: Side, n: usize, beta: f64, eps: f64, p: f64) -> f64 {
    let nf = n as f64;
    let scale = match side {
        Side::Upper => beta * nf * eps.powf(1.5),
        Side::Lower => beta * nf * nf * eps.powi(3),
    };
    -p.ln() / scale
}

/// Normalized log-tail ratios of `lambda_max(H_beta)` across an eps grid.
pub fn lower_bound_ratio(
    side: Side,
    n: usize,
    beta: f64,
    eps_grid: &[f64],
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<RatioPoint>> {
    let q = TailQuery {
        ensemble: Ensemble::Hermite,
        side,
        extremal: Extremal::Max,
        n,
        beta,
        kappa: None,
        eps: eps_grid.first().copied().unwrap_or(0.0),
        samples,
        seed,
    };
    let est = estimate_tail_grid(&q, eps_grid, workers)?;
    Ok(eps_grid
        .iter()
        .zip(est)
        .map(|(&eps, e)| RatioPoint {
            eps,
            hits: e.hits,
            p_hat: e.p_hat,
            ratio: (e.hits >= MIN_FIT_HITS && e.hits < e.samples)
                .then(|| ratio_from_p(side, n, beta, eps, e.p_hat)),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterPoint {
    pub n: usize,
    /// Mean of `n^{1/6} (lambda_max - 2 sqrt(n))`.
    pub mean: f64,
    pub se: f64,
}

/// Mean and standard error of the soft-edge statistic for each n.
pub fn tw_center_stability(
    n_grid: &[usize],
    beta: f64,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<CenterPoint>> {
    if n_grid.len() < 2 {
        return Err(Error::Parameter(
            "centering scan needs at least 2 sizes".into(),
        ));
    }
    if samples < 2 {
        return Err(Error::Precision("centering scan needs >= 2 samples".into()));
    }
    n_grid
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let xs: Vec<f64> =
                lambda_max_draws(Ensemble::Hermite, n, beta, None, samples, seed, workers)?
                    .into_iter()
                    .map(|l| nf.powf(1.0 / 6.0) * (l - 2.0 * nf.sqrt()))
                    .collect();
            let (mean, var) = mean_var(&xs);
            Ok(CenterPoint {
                n,
                mean,
                se: (var / samples as f64).sqrt(),
            })
        })
        .collect()
}
