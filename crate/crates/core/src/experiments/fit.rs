use super::TailEstimate;
use crate::{Error, Result};

/// Estimates with fewer hits than this are left out of exponent fits.
pub const MIN_FIT_HITS: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitReport {
    /// Fitted power of eps in `-log p ~ eps^slope`.
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points_used: usize,
    /// Points dropped for too few hits (including zero) or `p_hat = 1`.
    pub points_excluded: usize,
    pub expected_power: f64,
}

/// Ordinary least squares of `y` on `x`; returns (slope, intercept, rms residual).
pub(crate) fn least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if !(sxx > 1e-24 * (1.0 + mx * mx)) {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Ok((slope, intercept, (rss / m).sqrt()))
}

/// Fit `log(-log p)` against `log eps` over points with `0 < p < 1`.
pub fn fit_power_law(points: &[(f64, f64)], expected_power: f64) -> Result<FitReport> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(e, p)| e > 0.0 && p > 0.0 && p < 1.0)
        .collect();
    let excluded = points.len() - used.len();
    if used.len() < 3 {
        return Err(Error::Fit(format!(
            "{} usable points (need 3), {excluded} excluded",
            used.len()
        )));
    }
    let x: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = used.iter().map(|p| (-p.1.ln()).ln()).collect();
    let (slope, intercept, residual_rms) = least_squares(&x, &y)?;
    Ok(FitReport {
        slope,
        intercept,
        residual_rms,
        points_used: used.len(),
        points_excluded: excluded,
        expected_power,
    })
}

/// Exponent fit over tail estimates, dropping points with fewer than
/// [`MIN_FIT_HITS`] hits.
pub fn fit_exponent(estimates: &[(f64, TailEstimate)], expected_power: f64) -> Result<FitReport> {
    let pts: Vec<(f64, f64)> = estimates
        .iter()
        .map(|(e, t)| {
            if t.hits >= MIN_FIT_HITS {
                (*e, t.p_hat)
            } else {
                (*e, 0.0)
            }
        })
        .collect();
    fit_power_law(&pts, expected_power)
}
