use crate::{Error, Result};

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return Err(Error::Parameter(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    Ok(())
}

/// Tent `min(x k, 1 - x k)` on `k = 1..=floor(1/x)`, zero elsewhere.
fn tent(n: usize, slope: f64) -> Result<Vec<f64>> {
    // the tent vanishes at k = 1/slope, so a nonzero entry needs 1/slope > 1
    let support = (1.0 / slope).floor();
    if !(1.0 / slope > 1.0) {
        return Err(Error::Parameter(format!(
            "test vector support is empty (1/slope = {})",
            1.0 / slope
        )));
    }
    let support = (support as usize).min(n);
    let mut v = vec![0.0; n];
    for (i, x) in v.iter_mut().enumerate().take(support) {
        let u = slope * (i + 1) as f64;
        *x = u.min(1.0 - u);
    }
    Ok(v)
}

/// `v_k = (k / (n eps)) ∧ (1 - k / (n eps))` for `k <= n eps`.
pub fn test_vector_left_hermite(n: usize, eps: f64) -> Result<Vec<f64>> {
    check_eps(eps)?;
    tent(n, 1.0 / (n as f64 * eps))
}

/// `v_k = sqrt(eps) k ∧ (1 - sqrt(eps) k)` for `k <= eps^{-1/2}`; requires `n eps^{3/2} >= 1`.
pub fn test_vector_right_hermite(n: usize, eps: f64) -> Result<Vec<f64>> {
    check_eps(eps)?;
    if (n as f64) * eps.powf(1.5) < 1.0 {
        return Err(Error::Parameter(format!(
            "right-tail test vector needs n eps^(3/2) >= 1, got {}",
            n as f64 * eps.powf(1.5)
        )));
    }
    tent(n, eps.sqrt())
}

/// `v_k = (delta k / (n eps)) ∧ (1 - delta k / (n eps))` for `k <= n eps / delta`,
/// `delta = sqrt(n / kappa)`; requires `eps <= delta`.
pub fn test_vector_left_laguerre(n: usize, kappa: f64, eps: f64) -> Result<Vec<f64>> {
    check_eps(eps)?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Parameter(format!(
            "kappa must be finite and > 0, got {kappa}"
        )));
    }
    let delta = (n as f64 / kappa).sqrt();
    if eps > delta {
        return Err(Error::Parameter(format!(
            "eps = {eps} exceeds sqrt(n / kappa) = {delta}"
        )));
    }
    tent(n, delta / (n as f64 * eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::vector_stats;

    #[test]
    fn left_hermite_profile() {
        let v = test_vector_left_hermite(20, 0.5).unwrap();
        assert_eq!(v.iter().filter(|x| **x > 0.0).count(), 9);
        assert!((v[4] - 0.5).abs() < 1e-15);
        assert_eq!(v[9], 0.0);
    }

    #[test]
    fn right_hermite_exact_small_case() {
        let v = test_vector_right_hermite(10_000, 0.04).unwrap();
        let expect = [0.2, 0.4, 0.4, 0.2];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(v[4..].iter().all(|x| *x == 0.0));
        assert!((vector_stats(&v).kweight - 1.0).abs() < 1e-14);
    }

    #[test]
    fn preconditions() {
        assert!(test_vector_left_hermite(10, 0.05).is_err());
        assert!(test_vector_right_hermite(10, 0.1).is_err());
        assert!(test_vector_left_laguerre(100, 400.0, 0.6).is_err());
        assert!(test_vector_left_laguerre(100, 400.0, 0.005).is_err());
        assert!(test_vector_left_hermite(10, 1.5).is_err());
        assert!(test_vector_left_laguerre(100, 400.0, 0.1).is_ok());
    }
}
