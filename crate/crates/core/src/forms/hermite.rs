use super::{check_c, check_len, energy};
use crate::ensembles::{hermite_chi_param, HermiteSample};
use crate::randkit::mean_chi_pos;
use crate::Result;

/// `E chi_{beta(n-k)} / sqrt(beta)` for k = 1..n-1.
pub fn hermite_mean_offdiag(n: usize, beta: f64) -> Vec<f64> {
    let sb = beta.sqrt();
    (0..n.saturating_sub(1))
        .map(|i| mean_chi_pos(hermite_chi_param(n, beta, i)) / sb)
        .collect()
}

/// `H(v) = v^T (H_beta - 2 sqrt(n) I) v` from the raw noise.
pub fn hermite_form(s: &HermiteSample, v: &[f64]) -> Result<f64> {
    let n = s.n();
    check_len(n, v)?;
    let sb = s.beta().sqrt();
    let mut diag = 0.0;
    let mut norm = 0.0;
    for (g, x) in s.g().iter().zip(v) {
        diag += g * x * x;
        norm += x * x;
    }
    let off: f64 = s
        .chi()
        .iter()
        .zip(v.windows(2))
        .map(|(c, w)| c * w[0] * w[1])
        .sum();
    Ok(diag / sb + 2.0 * off / sb - 2.0 * (n as f64).sqrt() * norm)
}

/// `H_c(v)`: centered off-diagonal noise and the energy penalty
/// `c sqrt(n) sum (v_{k+1}-v_k)^2 + (c / sqrt(n)) sum k v_k^2`.
pub fn hermite_form_c(s: &HermiteSample, v: &[f64], c: f64) -> Result<f64> {
    let n = s.n();
    check_len(n, v)?;
    check_c(c)?;
    let sb = s.beta().sqrt();
    let means = hermite_mean_offdiag(n, s.beta());
    let diag: f64 = s.g().iter().zip(v).map(|(g, x)| g * x * x).sum();
    let off: f64 = s
        .chi()
        .iter()
        .zip(&means)
        .zip(v.windows(2))
        .map(|((c, m), w)| (c / sb - m) * w[0] * w[1])
        .sum();
    Ok(diag / sb + 2.0 * off - c * energy(v))
}

/// `I(v) = sqrt(n) sum_{k=1}^{n-1} (v_{k+1}-v_k)^2 + (1/sqrt(n)) sum k v_k^2`.
pub fn energy_i(v: &[f64], n: usize) -> Result<f64> {
    check_len(n, v)?;
    let rn = (n as f64).sqrt();
    let grad: f64 = v.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    let kw: f64 = v
        .iter()
        .enumerate()
        .map(|(i, x)| (i + 1) as f64 * x * x)
        .sum();
    Ok(rn * grad + kw / rn)
}

/// `J(v) = sum m_k (v_{k+1}-v_k)^2 + sum (sqrt(n) - m_k)(v_k^2 + v_{k+1}^2)`
/// with `m_k = E chi_{beta(n-k)} / sqrt(beta)`.
pub fn energy_j(v: &[f64], n: usize, beta: f64) -> Result<f64> {
    check_len(n, v)?;
    let rn = (n as f64).sqrt();
    let means = hermite_mean_offdiag(n, beta);
    Ok(means
        .iter()
        .zip(v.windows(2))
        .map(|(m, w)| m * (w[1] - w[0]).powi(2) + (rn - m) * (w[0] * w[0] + w[1] * w[1]))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_hermite, HermiteParams};
    use crate::randkit::RngStream;

    #[test]
    fn one_by_one_reductions() {
        let p = HermiteParams::new(1, 2.0).unwrap();
        let s = HermiteSample::from_noise(p, vec![0.7], vec![]).unwrap();
        let expect = 0.7 / 2f64.sqrt() - 2.0;
        assert!((hermite_form(&s, &[1.0]).unwrap() - expect).abs() < 1e-15);
        let c = 0.3;
        let expect_c = 0.7 / 2f64.sqrt() - 3.0 * c;
        assert!((hermite_form_c(&s, &[1.0], c).unwrap() - expect_c).abs() < 1e-15);
    }

    #[test]
    fn zero_vector() {
        let mut st = RngStream::new(3, 0);
        let s = sample_hermite(HermiteParams::new(6, 1.0).unwrap(), &mut st);
        let z = vec![0.0; 6];
        assert_eq!(hermite_form(&s, &z).unwrap(), 0.0);
        assert_eq!(hermite_form_c(&s, &z, 2.0).unwrap(), 0.0);
        assert_eq!(energy_i(&z, 6).unwrap(), 0.0);
        assert_eq!(energy_j(&z, 6, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn dimension_and_c_errors() {
        let mut st = RngStream::new(3, 0);
        let s = sample_hermite(HermiteParams::new(4, 1.0).unwrap(), &mut st);
        assert!(hermite_form(&s, &[1.0; 3]).is_err());
        assert!(hermite_form_c(&s, &[1.0; 4], 0.0).is_err());
        assert!(energy_j(&[1.0; 3], 4, 1.0).is_err());
    }

    #[test]
    fn noise_cancels_in_difference() {
        // H - H_c depends only on v, not on the draw.
        let p = HermiteParams::new(9, 2.0).unwrap();
        let v: Vec<f64> = (0..9).map(|i| ((i * 7 % 5) as f64 - 2.0) / 3.0).collect();
        let mut diffs = Vec::new();
        for seed in 0..3 {
            let mut st = RngStream::new(seed, 1);
            let s = sample_hermite(p, &mut st);
            diffs.push(hermite_form(&s, &v).unwrap() - hermite_form_c(&s, &v, 0.5).unwrap());
        }
        assert!((diffs[0] - diffs[1]).abs() < 1e-12);
        assert!((diffs[0] - diffs[2]).abs() < 1e-12);
    }
}
