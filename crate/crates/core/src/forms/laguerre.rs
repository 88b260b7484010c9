use super::{check_c, check_len, energy};
use crate::ensembles::{
    laguerre_chi_param, laguerre_chitilde_param, LaguerreParams, LaguerreSample,
};
use crate::randkit::mean_chi_pos;
use crate::{Error, Result};

/// Centered noise variables of one Laguerre draw, 0-based:
/// `z[k-1] = Z_k` (k = 1..n), `z_tilde[k-1] = Z~_k` with `z_tilde[0] = 0`
/// since `Z~_1` does not appear, `y[k-1] = Y_k` (k = 1..n-1).
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreNoise {
    pub z: Vec<f64>,
    pub z_tilde: Vec<f64>,
    pub y: Vec<f64>,
}

/// `E[chi_{beta(kappa-k+1)} chi~_{beta(n-k)}]` for k = 1..n-1.
fn mean_products(p: &LaguerreParams) -> Vec<f64> {
    let (n, kappa, beta) = (p.n(), p.kappa(), p.beta());
    (0..n.saturating_sub(1))
        .map(|i| {
            mean_chi_pos(laguerre_chi_param(kappa, beta, i))
                * mean_chi_pos(laguerre_chitilde_param(n, beta, i))
        })
        .collect()
}

pub fn laguerre_noise(s: &LaguerreSample) -> LaguerreNoise {
    let p = s.params();
    let (n, kappa, beta) = (p.n(), p.kappa(), p.beta());
    let scale = 1.0 / (beta * kappa).sqrt();
    let z = s
        .chi()
        .iter()
        .enumerate()
        .map(|(i, c)| (c * c - laguerre_chi_param(kappa, beta, i)) * scale)
        .collect();
    let mut z_tilde = vec![0.0; n];
    for (i, c) in s.chitilde().iter().enumerate() {
        // chitilde[i] has parameter beta(n-1-i) and feeds Z~_{i+2}
        z_tilde[i + 1] = (c * c - laguerre_chitilde_param(n, beta, i)) * scale;
    }
    let y = s
        .chi()
        .iter()
        .zip(s.chitilde())
        .zip(mean_products(&p))
        .map(|((a, b), m)| (a * b - m) * scale)
        .collect();
    LaguerreNoise { z, z_tilde, y }
}

/// `L(v) = kappa^{-1/2} v^T (L_beta - (sqrt(kappa) + sqrt(n))^2 I) v`,
/// evaluated term by term from the raw chi draws.
pub fn laguerre_form(s: &LaguerreSample, v: &[f64]) -> Result<f64> {
    let n = s.n();
    check_len(n, v)?;
    let (kappa, beta) = (s.kappa(), s.beta());
    let chi = s.chi();
    let cht = s.chitilde();
    let mut diag = 0.0;
    let mut norm = 0.0;
    for k in 0..n {
        let x2 = v[k] * v[k];
        diag += chi[k] * chi[k] * x2;
        if k >= 1 {
            diag += cht[k - 1] * cht[k - 1] * x2;
        }
        norm += x2;
    }
    let off: f64 = (0..n.saturating_sub(1))
        .map(|k| chi[k] * cht[k] * v[k] * v[k + 1])
        .sum();
    let shift = (kappa.sqrt() + (n as f64).sqrt()).powi(2);
    Ok((diag / beta + 2.0 * off / beta - shift * norm) / kappa.sqrt())
}

fn noise_form(noise: &LaguerreNoise, v: &[f64]) -> f64 {
    let mut acc = 0.0;
    for ((z, zt), x) in noise.z.iter().zip(&noise.z_tilde).zip(v) {
        acc += (z + zt) * x * x;
    }
    for (k, y) in noise.y.iter().enumerate() {
        acc += 2.0 * y * v[k] * v[k + 1];
    }
    acc
}

/// `L_c(v)` with the centered noise `Z, Z~, Y` and energy penalty `c E(v)`.
pub fn laguerre_form_c(s: &LaguerreSample, v: &[f64], c: f64) -> Result<f64> {
    check_len(s.n(), v)?;
    check_c(c)?;
    let noise = laguerre_noise(s);
    Ok(noise_form(&noise, v) / s.beta().sqrt() - c * energy(v))
}

/// `lambda_k = E[chi_{beta(kappa-k+1)} chi~_{beta(n-k)}] / (beta sqrt(kappa))`, k = 1..n-1.
pub fn laguerre_lambda(p: &LaguerreParams) -> Vec<f64> {
    let d = p.beta() * p.kappa().sqrt();
    mean_products(p).into_iter().map(|m| m / d).collect()
}

fn require_prime_range(p: &LaguerreParams) -> Result<()> {
    if p.kappa() < p.n() as f64 + 1.0 {
        return Err(Error::Parameter(format!(
            "the simplified form needs kappa >= n + 1, got kappa = {} with n = {}",
            p.kappa(),
            p.n()
        )));
    }
    Ok(())
}

/// Simplified lower-edge form
/// `L'(v) = beta^{-1/2} [sum -Z_k v_k^2 + sum -Z~_k v_k^2 + 2 sum -Y_k v_k v_{k+1}]
///          - sum lambda_k (v_{k+1} + v_k)^2 - (alpha^2 / sqrt(n)) sum k v_k^2`
/// with `alpha = 1 - sqrt(n / kappa)`.
pub fn laguerre_form_prime(s: &LaguerreSample, v: &[f64]) -> Result<f64> {
    let p = s.params();
    require_prime_range(&p)?;
    check_len(p.n(), v)?;
    let n = p.n() as f64;
    let alpha = 1.0 - (n / p.kappa()).sqrt();
    let noise = laguerre_noise(s);
    let coupling: f64 = laguerre_lambda(&p)
        .iter()
        .zip(v.windows(2))
        .map(|(l, w)| l * (w[0] + w[1]).powi(2))
        .sum();
    let kw: f64 = v
        .iter()
        .enumerate()
        .map(|(i, x)| (i + 1) as f64 * x * x)
        .sum();
    Ok(-noise_form(&noise, v) / p.beta().sqrt() - coupling - alpha * alpha * kw / n.sqrt())
}

/// `U_k = ((chi_{beta(kappa-k+1)} - chi~_{beta(n-k)})^2 - E[...]) / sqrt(beta kappa)`,
/// k = 1..n, with `chi~_0 = 0`.
pub fn u_noise(s: &LaguerreSample) -> Vec<f64> {
    let p = s.params();
    let (n, kappa, beta) = (p.n(), p.kappa(), p.beta());
    let scale = 1.0 / (beta * kappa).sqrt();
    let prods = mean_products(&p);
    (0..n)
        .map(|i| {
            let a = s.chi()[i];
            let r1 = laguerre_chi_param(kappa, beta, i);
            let (b, r2, m) = if i + 1 < n {
                (
                    s.chitilde()[i],
                    laguerre_chitilde_param(n, beta, i),
                    prods[i],
                )
            } else {
                (0.0, 0.0, 0.0)
            };
            ((a - b).powi(2) - (r1 + r2 - 2.0 * m)) * scale
        })
        .collect()
}

/// The noise part of `L'` computed two ways, both scaled by `beta^{-1/2}`:
/// directly from `Z, Z~, Y`, and regrouped as
/// `sum -U_k v_k^2 + sum_{k>=2} -Z~_k (v_k^2 - v_{k-1}^2) + 2 sum -Y_k v_k (v_{k+1} + v_k)`.
pub fn u_noise_groupings(s: &LaguerreSample, v: &[f64]) -> Result<(f64, f64)> {
    let n = s.n();
    check_len(n, v)?;
    let sb = s.beta().sqrt();
    let noise = laguerre_noise(s);
    let direct = -noise_form(&noise, v) / sb;
    let u = u_noise(s);
    let mut acc = 0.0;
    for k in 0..n {
        acc -= u[k] * v[k] * v[k];
    }
    for k in 1..n {
        acc -= noise.z_tilde[k] * (v[k] * v[k] - v[k - 1] * v[k - 1]);
    }
    for (k, y) in noise.y.iter().enumerate() {
        acc -= 2.0 * y * v[k] * (v[k + 1] + v[k]);
    }
    Ok((direct, acc / sb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_laguerre;
    use crate::randkit::RngStream;

    fn draw(n: usize, kappa: f64, beta: f64, seed: u64) -> LaguerreSample {
        let mut st = RngStream::new(seed, 0);
        sample_laguerre(LaguerreParams::new(n, kappa, beta).unwrap(), &mut st)
    }

    #[test]
    fn one_by_one_reduction() {
        let p = LaguerreParams::new(1, 3.0, 2.0).unwrap();
        let s = LaguerreSample::from_noise(p, vec![2.2], vec![]).unwrap();
        let expect = (2.2f64 * 2.2 / 2.0 - (3f64.sqrt() + 1.0).powi(2)) / 3f64.sqrt();
        assert!((laguerre_form(&s, &[1.0]).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn zero_vector() {
        let s = draw(5, 9.0, 1.0, 2);
        let z = vec![0.0; 5];
        assert_eq!(laguerre_form(&s, &z).unwrap(), 0.0);
        assert_eq!(laguerre_form_c(&s, &z, 1.0).unwrap(), 0.0);
        assert_eq!(laguerre_form_prime(&s, &z).unwrap(), 0.0);
    }

    #[test]
    fn prime_requires_kappa_above_n() {
        let s = draw(5, 5.5, 1.0, 2);
        assert!(matches!(
            laguerre_form_prime(&s, &[1.0; 5]),
            Err(Error::Parameter(_))
        ));
        let s = draw(5, 6.0, 1.0, 2);
        assert!(laguerre_form_prime(&s, &[1.0; 5]).is_ok());
    }

    #[test]
    fn noise_shapes() {
        let s = draw(6, 10.0, 2.0, 4);
        let nz = laguerre_noise(&s);
        assert_eq!((nz.z.len(), nz.z_tilde.len(), nz.y.len()), (6, 6, 5));
        assert_eq!(nz.z_tilde[0], 0.0);
        assert_eq!(u_noise(&s).len(), 6);
    }

    #[test]
    fn groupings_agree() {
        let s = draw(12, 30.0, 2.0, 8);
        let v: Vec<f64> = (0..12).map(|i| ((i * 5 % 7) as f64 - 3.0) / 4.0).collect();
        let (a, b) = u_noise_groupings(&s, &v).unwrap();
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn last_u_is_pure_z() {
        let s = draw(4, 8.0, 1.0, 1);
        let u = u_noise(&s);
        let nz = laguerre_noise(&s);
        assert!((u[3] - nz.z[3]).abs() < 1e-14);
    }
}
