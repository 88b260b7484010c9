use super::{hermite_form, hermite_form_c, laguerre_form, laguerre_form_c, laguerre_lambda};
use crate::ensembles::{sample_hermite, sample_laguerre, HermiteParams, LaguerreParams};
use crate::randkit::RngStream;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandwichKind {
    Hermite,
    Laguerre,
}

#[derive(Clone, Debug)]
pub struct SandwichConfig {
    pub kind: SandwichKind,
    /// Candidate `(a, b)` pairs with `a > b > 0`.
    pub trial_grid: Vec<(f64, f64)>,
    pub trials: usize,
    pub n_grid: Vec<usize>,
    pub beta_grid: Vec<f64>,
    /// Laguerre only: `kappa = ratio * n`, each ratio giving `kappa > n - 1`.
    pub kappa_ratios: Vec<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichResult {
    /// Smallest passing `a`.
    pub a: f64,
    /// Largest passing `b`.
    pub b: f64,
    /// Every grid pair with zero violations.
    pub passing: Vec<(f64, f64)>,
    pub trials: usize,
}

/// Random unit vector from one of several shape families, rotated by `t`.
pub(crate) fn trial_vector(stream: &mut RngStream, n: usize, t: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    match t % 5 {
        0 => v.iter_mut().for_each(|x| *x = stream.standard_normal()),
        1 => {
            let freq = 1.0 + (stream.uniform() * 4.0).floor();
            let phase = stream.uniform();
            for (i, x) in v.iter_mut().enumerate() {
                let u = (i + 1) as f64 / (n + 1) as f64;
                *x = (std::f64::consts::PI * (freq * u + phase)).sin();
            }
        }
        2 => {
            let width = 1 + (stream.uniform() * n as f64) as usize;
            let start = (stream.uniform() * (n - width.min(n) + 1) as f64) as usize;
            for (j, x) in v.iter_mut().skip(start).take(width).enumerate() {
                let u = (j + 1) as f64 / (width + 1) as f64;
                *x = u.min(1.0 - u);
            }
        }
        3 => {
            let k = (stream.uniform() * n as f64) as usize;
            v[k.min(n - 1)] = 1.0;
        }
        _ => v.iter_mut().for_each(|x| *x = 1.0),
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    } else {
        v[0] = 1.0;
    }
    v
}

fn pick<T: Copy>(stream: &mut RngStream, xs: &[T]) -> T {
    xs[((stream.uniform() * xs.len() as f64) as usize).min(xs.len() - 1)]
}

fn validate(cfg: &SandwichConfig) -> Result<()> {
    if cfg.trial_grid.is_empty() || cfg.n_grid.is_empty() || cfg.beta_grid.is_empty() {
        return Err(Error::Parameter(
            "calibration grids must be nonempty".into(),
        ));
    }
    if cfg.kind == SandwichKind::Laguerre && cfg.kappa_ratios.is_empty() {
        return Err(Error::Parameter(
            "laguerre calibration needs kappa ratios".into(),
        ));
    }
    if cfg.trial_grid.iter().any(|&(a, b)| !(a > b && b > 0.0)) {
        return Err(Error::Parameter("grid pairs must satisfy a > b > 0".into()));
    }
    if cfg.n_grid.contains(&0) {
        return Err(Error::Parameter("n must be >= 1".into()));
    }
    Ok(())
}

/// Form value at `c` (`None` for the plain form) on a given vector.
type FormEval = Box<dyn Fn(Option<f64>, &[f64]) -> Result<f64>>;

/// Search a grid of `(a, b)` for the tightest sandwich
/// `form_a(v) <= form(v) <= form_b(v)` that holds on every trial, with slack
/// `1e-9 * (1 + |form| + |form_c|)`.
///
/// The lower inequality depends only on `a` and the upper only on `b`, so the
/// returned `(a, b)` combines the best of each over the passing pairs.
pub fn calibrate_sandwich(cfg: &SandwichConfig) -> Result<SandwichResult> {
    validate(cfg)?;
    let mut a_ok: Vec<(f64, bool)> = cfg.trial_grid.iter().map(|p| (p.0, true)).collect();
    let mut b_ok: Vec<(f64, bool)> = cfg.trial_grid.iter().map(|p| (p.1, true)).collect();
    for t in 0..cfg.trials {
        let mut st = RngStream::new(cfg.seed, t as u64);
        let n = pick(&mut st, &cfg.n_grid);
        let beta = pick(&mut st, &cfg.beta_grid);
        let eval: FormEval = match cfg.kind {
            SandwichKind::Hermite => {
                let s = sample_hermite(HermiteParams::new(n, beta)?, &mut st);
                Box::new(move |c, v| match c {
                    None => hermite_form(&s, v),
                    Some(c) => hermite_form_c(&s, v, c),
                })
            }
            SandwichKind::Laguerre => {
                let kappa = pick(&mut st, &cfg.kappa_ratios) * n as f64;
                let s = sample_laguerre(LaguerreParams::new(n, kappa, beta)?, &mut st);
                Box::new(move |c, v| match c {
                    None => laguerre_form(&s, v),
                    Some(c) => laguerre_form_c(&s, v, c),
                })
            }
        };
        let v = trial_vector(&mut st, n, t);
        let f = eval(None, &v)?;
        for (a, ok) in a_ok.iter_mut().filter(|x| x.1) {
            let fa = eval(Some(*a), &v)?;
            *ok = fa <= f + 1e-9 * (1.0 + f.abs() + fa.abs());
        }
        for (b, ok) in b_ok.iter_mut().filter(|x| x.1) {
            let fb = eval(Some(*b), &v)?;
            *ok = f <= fb + 1e-9 * (1.0 + f.abs() + fb.abs());
        }
    }
    let passing: Vec<(f64, f64)> = cfg
        .trial_grid
        .iter()
        .zip(a_ok.iter().zip(&b_ok))
        .filter(|(_, (a, b))| a.1 && b.1)
        .map(|(p, _)| *p)
        .collect();
    if passing.is_empty() {
        return Err(Error::Calibration(format!(
            "no (a, b) pair held on all {} trials",
            cfg.trials
        )));
    }
    let a = passing.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let b = passing.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(SandwichResult {
        a,
        b,
        passing,
        trials: cfg.trials,
    })
}

/// Smallest `C` with `lambda_k >= sqrt(n) / C` for all `k <= n/2` over the grid.
pub fn lambda_appraisal_constant(
    n_grid: &[usize],
    kappa_ratios: &[f64],
    beta_grid: &[f64],
) -> Result<f64> {
    let mut c = 0.0f64;
    for &n in n_grid {
        for &r in kappa_ratios {
            for &beta in beta_grid {
                let p = LaguerreParams::new(n, r * n as f64, beta)?;
                let lam = laguerre_lambda(&p);
                let rn = (n as f64).sqrt();
                for l in lam.iter().take(n / 2) {
                    c = c.max(rn / l);
                }
            }
        }
    }
    Ok(c)
}
