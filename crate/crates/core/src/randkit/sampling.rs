use super::RngStream;
use crate::{Error, Result};

/// Draw from N(mean, sd^2). `sd = 0` returns `mean` without consuming the stream.
pub fn sample_gaussian(stream: &mut RngStream, mean: f64, sd: f64) -> f64 {
    debug_assert!(sd >= 0.0);
    if sd == 0.0 {
        return mean;
    }
    mean + sd * stream.standard_normal()
}

/// Gamma(shape, 1) by Marsaglia–Tsang squeeze/rejection.
///
/// Shapes below one are boosted to `shape + 1` and multiplied by
/// `U^(1/shape)`, evaluated in log space so tiny shapes underflow to zero
/// instead of producing NaN.
pub fn sample_gamma(stream: &mut RngStream, shape: f64) -> Result<f64> {
    if shape.is_nan() || shape <= 0.0 || shape.is_infinite() {
        return Err(Error::Domain(format!(
            "gamma shape must be finite and > 0, got {shape}"
        )));
    }
    Ok(gamma_unchecked(stream, shape))
}

#[inline]
pub(crate) fn gamma_unchecked(stream: &mut RngStream, shape: f64) -> f64 {
    if shape < 1.0 {
        let boosted = marsaglia_tsang(stream, shape + 1.0);
        let log_u = stream.uniform_open0().ln();
        return (boosted.ln() + log_u / shape).exp();
    }
    marsaglia_tsang(stream, shape)
}

#[inline]
fn marsaglia_tsang(stream: &mut RngStream, shape: f64) -> f64 {
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.standard_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = stream.uniform_open0();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Draw chi_r = sqrt(2 Gamma(r/2, 1)); fractional r is supported.
pub fn sample_chi(stream: &mut RngStream, r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 || r.is_infinite() {
        return Err(Error::Domain(format!(
            "chi parameter must be finite and > 0, got {r}"
        )));
    }
    Ok(chi_unchecked(stream, r))
}

#[inline]
pub(crate) fn chi_unchecked(stream: &mut RngStream, r: f64) -> f64 {
    (2.0 * gamma_unchecked(stream, 0.5 * r)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_gaussian() {
        let mut s = RngStream::new(1, 1);
        let before = s.position();
        assert_eq!(sample_gaussian(&mut s, 0.0, 0.0), 0.0);
        assert_eq!(sample_gaussian(&mut s, -3.5, 0.0), -3.5);
        assert_eq!(s.position(), before);
    }

    #[test]
    fn invalid_parameters() {
        let mut s = RngStream::new(1, 1);
        assert!(sample_chi(&mut s, 0.0).is_err());
        assert!(sample_chi(&mut s, -1.0).is_err());
        assert!(sample_gamma(&mut s, f64::NAN).is_err());
        assert!(sample_gamma(&mut s, f64::INFINITY).is_err());
    }

    #[test]
    fn small_shapes_stay_finite() {
        let mut s = RngStream::new(9, 0);
        for _ in 0..10_000 {
            let g = sample_gamma(&mut s, 1e-3).unwrap();
            assert!(g.is_finite() && g >= 0.0);
            let c = sample_chi(&mut s, 0.05).unwrap();
            assert!(c.is_finite() && c >= 0.0);
        }
    }

    #[test]
    fn gamma_mean_matches_shape() {
        // Var Gamma(k) = k, so the sample mean over N draws has SE sqrt(k/N).
        for &k in &[0.3, 1.0, 2.5, 40.0] {
            let mut s = RngStream::new(5, (k * 10.0) as u64);
            let n = 200_000;
            let mean = (0..n)
                .map(|_| sample_gamma(&mut s, k).unwrap())
                .sum::<f64>()
                / n as f64;
            let se = (k / n as f64).sqrt();
            assert!((mean - k).abs() < 4.0 * se, "shape {k}: mean {mean}");
        }
    }
}
