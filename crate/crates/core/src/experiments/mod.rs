//! Monte Carlo estimates of extremal-eigenvalue tails, variances and
//! centering, plus power-law fits of the tail exponents.
//!
//! Every sample index `i` draws from its own stream `RngStream::new(seed, i)`
//! and samples are processed in fixed blocks whose results are combined in
//! block order, so outputs are bit-identical for any worker count.

mod binom;
mod fit;
mod par;
mod scans;

pub use binom::clopper_pearson;
pub use fit::{fit_exponent, fit_power_law, FitReport, MIN_FIT_HITS};
pub use par::resolve_workers;
pub use scans::{
    lower_bound_ratio, ratio_from_p, tw_center_stability, variance_scan, CenterPoint, RatioPoint,
    VariancePoint, VarianceScan,
};

use crate::eigentri::{pivot_floor, sturm_count_raw};
use crate::ensembles::{
    resample_hermite, resample_laguerre, sample_hermite, sample_laguerre, HermiteParams,
    LaguerreParams, SymTridiagonal,
};
use crate::randkit::RngStream;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    Hermite,
    Laguerre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    Max,
    Min,
}

impl Ensemble {
    pub fn as_str(self) -> &'static str {
        match self {
            Ensemble::Hermite => "hermite",
            Ensemble::Laguerre => "laguerre",
        }
    }
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

impl Extremal {
    pub fn as_str(self) -> &'static str {
        match self {
            Extremal::Max => "max",
            Extremal::Min => "min",
        }
    }
}

/// Ratio `kappa / n` at and above which the lower-edge window is all of `(0, 1]`.
pub const EASY_KAPPA_RATIO: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailQuery {
    pub ensemble: Ensemble,
    pub side: Side,
    pub extremal: Extremal,
    pub n: usize,
    pub beta: f64,
    /// Laguerre only.
    pub kappa: Option<f64>,
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub hits: u64,
    pub samples: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TailEstimate {
    pub fn from_counts(hits: u64, samples: u64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(hits, samples);
        TailEstimate {
            hits,
            samples,
            p_hat: hits as f64 / samples as f64,
            ci_low,
            ci_high,
        }
    }
}

/// Largest eps admitted for a lower deviation of `lambda_min`:
/// all of `(0, 1]` when `kappa >= 2n`, otherwise
/// `sqrt(n/kappa) * min(alpha^14, alpha^2 n^{-2/5})` with `alpha = 1 - sqrt(n/kappa)`.
pub fn lambda_min_eps_window(n: usize, kappa: f64) -> f64 {
    let nf = n as f64;
    if kappa >= EASY_KAPPA_RATIO * nf {
        return 1.0;
    }
    let d = (nf / kappa).sqrt();
    let alpha = 1.0 - d;
    d * alpha.powi(14).min(alpha * alpha * nf.powf(-0.4))
}

impl TailQuery {
    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if self.samples == 0 {
            return Err(Error::Parameter("samples must be >= 1".into()));
        }
        self.validate_model()?;
        if self.ensemble == Ensemble::Laguerre {
            let kappa = self.kappa.unwrap();
            let d = (self.n as f64 / kappa).sqrt();
            match self.extremal {
                Extremal::Max if self.eps > d => {
                    return Err(Error::Parameter(format!(
                        "eps = {} is outside the small-deviation window eps <= sqrt(n/kappa) = {d}",
                        self.eps
                    )));
                }
                Extremal::Min => {
                    let w = lambda_min_eps_window(self.n, kappa);
                    if self.eps > w {
                        return Err(Error::Parameter(format!(
                            "eps = {} is outside the lambda_min window (0, {w}]",
                            self.eps
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Checks that do not involve eps.
    fn validate_model(&self) -> Result<()> {
        match self.ensemble {
            Ensemble::Hermite => {
                HermiteParams::new(self.n, self.beta)?;
                if self.kappa.is_some() {
                    return Err(Error::Parameter("kappa applies to laguerre only".into()));
                }
                if self.extremal == Extremal::Min {
                    return Err(Error::Parameter(
                        "lambda_min queries apply to laguerre lower deviations only".into(),
                    ));
                }
            }
            Ensemble::Laguerre => {
                let kappa = self
                    .kappa
                    .ok_or_else(|| Error::Parameter("laguerre queries need kappa".into()))?;
                LaguerreParams::new(self.n, kappa, self.beta)?;
                if self.extremal == Extremal::Min {
                    if self.side != Side::Lower {
                        return Err(Error::Parameter(
                            "lambda_min queries apply to lower deviations only".into(),
                        ));
                    }
                    if kappa < self.n as f64 + 1.0 {
                        return Err(Error::Parameter(format!(
                            "lambda_min queries need kappa >= n + 1, got {kappa}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The deterministic centre the deviation is measured from:
    /// `2 sqrt(n)`, `(sqrt(kappa) + sqrt(n))^2` or `(sqrt(kappa) - sqrt(n))^2`.
    pub fn centre(&self) -> f64 {
        let rn = (self.n as f64).sqrt();
        match (self.ensemble, self.extremal) {
            (Ensemble::Hermite, _) => 2.0 * rn,
            (Ensemble::Laguerre, Extremal::Max) => (self.kappa.unwrap().sqrt() + rn).powi(2),
            (Ensemble::Laguerre, Extremal::Min) => (self.kappa.unwrap().sqrt() - rn).powi(2),
        }
    }

    pub fn threshold(&self) -> f64 {
        threshold(self.centre(), self.side, self.eps)
    }
}

fn threshold(centre: f64, side: Side, eps: f64) -> f64 {
    match side {
        Side::Upper => centre * (1.0 + eps),
        Side::Lower => centre * (1.0 - eps),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return Err(Error::Parameter(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    Ok(())
}

/// Event decided by one Sturm count at the threshold `t`:
/// `lambda_max >= t` iff fewer than n eigenvalues lie below t,
/// `lambda_max <= t` iff all do, `lambda_min <= t` iff at least one does
/// (ties have probability zero).
#[inline]
fn event(count: usize, n: usize, side: Side, extremal: Extremal) -> bool {
    match (extremal, side) {
        (Extremal::Max, Side::Upper) => count < n,
        (Extremal::Max, Side::Lower) => count == n,
        (Extremal::Min, _) => count >= 1,
    }
}

/// Draws `samples` matrices of the query's ensemble, calling `visit` with
/// each matrix in sample order inside each block.
#[allow(clippy::too_many_arguments)]
pub(crate) fn for_each_matrix<T, F>(
    ensemble: Ensemble,
    n: usize,
    beta: f64,
    kappa: Option<f64>,
    samples: u64,
    seed: u64,
    workers: usize,
    init: impl Fn() -> T + Sync,
    visit: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut T, &SymTridiagonal) + Sync,
{
    match ensemble {
        Ensemble::Hermite => {
            let p = HermiteParams::new(n, beta)?;
            par::blocks(samples, workers, |range| {
                let mut acc = init();
                let mut st = RngStream::new(seed, range.start);
                let mut s = sample_hermite(p, &mut st);
                let mut t = s.matrix();
                for i in range {
                    let mut st = RngStream::new(seed, i);
                    resample_hermite(&mut s, &mut st);
                    s.matrix_into(&mut t);
                    visit(&mut acc, &t);
                }
                acc
            })
        }
        Ensemble::Laguerre => {
            let kappa =
                kappa.ok_or_else(|| Error::Parameter("laguerre queries need kappa".into()))?;
            let p = LaguerreParams::new(n, kappa, beta)?;
            par::blocks(samples, workers, |range| {
                let mut acc = init();
                let mut st = RngStream::new(seed, range.start);
                let mut s = sample_laguerre(p, &mut st);
                let mut t = s.matrix();
                for i in range {
                    let mut st = RngStream::new(seed, i);
                    resample_laguerre(&mut s, &mut st);
                    s.matrix_into(&mut t);
                    visit(&mut acc, &t);
                }
                acc
            })
        }
    }
}

/// Tail estimate for one query. `workers = 0` uses every available core.
pub fn estimate_tail(q: &TailQuery, workers: usize) -> Result<TailEstimate> {
    Ok(estimate_tail_grid(q, &[q.eps], workers)?[0])
}

/// Tail estimates for the query at each eps in `eps_grid`, sharing draws:
/// sample `i` is the same matrix for every eps, so the estimated tail is
/// monotone in eps sample by sample.
pub fn estimate_tail_grid(
    q: &TailQuery,
    eps_grid: &[f64],
    workers: usize,
) -> Result<Vec<TailEstimate>> {
    if eps_grid.is_empty() {
        return Err(Error::Parameter("eps grid is empty".into()));
    }
    for &eps in eps_grid {
        TailQuery { eps, ..*q }.validate()?;
    }
    let centre = q.centre();
    let thresholds: Vec<f64> = eps_grid
        .iter()
        .map(|&e| threshold(centre, q.side, e))
        .collect();
    let (n, side, extremal) = (q.n, q.side, q.extremal);
    let blocks = for_each_matrix(
        q.ensemble,
        q.n,
        q.beta,
        q.kappa,
        q.samples,
        q.seed,
        workers,
        || vec![0u64; thresholds.len()],
        |hits, t| {
            let pivmin = pivot_floor(t);
            for (h, &x) in hits.iter_mut().zip(&thresholds) {
                let c = sturm_count_raw(t.diag(), t.offdiag(), x, pivmin);
                *h += event(c, n, side, extremal) as u64;
            }
        },
    )?;
    let mut totals = vec![0u64; thresholds.len()];
    for b in blocks {
        for (t, h) in totals.iter_mut().zip(b) {
            *t += h;
        }
    }
    Ok(totals
        .into_iter()
        .map(|h| TailEstimate::from_counts(h, q.samples))
        .collect())
}
