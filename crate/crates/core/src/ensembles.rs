//! Tridiagonal beta-Hermite and bidiagonal beta-Laguerre models.
//!
//! Indexing is 0-based throughout. The mathematical row index `k = 1..n`
//! maps to `i = k - 1`, which fixes the chi parameters as follows:
//!
//! | array            | entry `i` is       | parameter           |
//! |------------------|--------------------|---------------------|
//! | `HermiteSample::g`        | `g_{i+1}`          | N(0, 2)             |
//! | `HermiteSample::chi`      | `chi_{beta(n-k)}`  | `beta (n - 1 - i)`  |
//! | `LaguerreSample::chi`     | `chi_{beta(kappa-k+1)}` | `beta (kappa - i)` |
//! | `LaguerreSample::chitilde`| `chi~_{beta(n-k)}` | `beta (n - 1 - i)`  |
//!
//! The helpers [`hermite_chi_param`], [`laguerre_chi_param`] and
//! [`laguerre_chitilde_param`] are the single source of this map.

use crate::randkit::{chi_unchecked, RngStream};
use crate::{Error, Result};

/// Symmetric tridiagonal matrix stored as diagonal and off-diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Input("tridiagonal matrix needs n >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Input(format!(
                "off-diagonal length {} does not match n - 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Input("tridiagonal entries must be finite".into()));
        }
        Ok(Self { diag, offdiag })
    }

    /// Builds without validation; callers guarantee the shape invariant.
    pub(crate) fn from_parts_unchecked(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        debug_assert_eq!(offdiag.len() + 1, diag.len());
        Self { diag, offdiag }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(d.to_vec(), vec![0.0; d.len().saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<f64>, &mut Vec<f64>) {
        (&mut self.diag, &mut self.offdiag)
    }

    /// Gershgorin interval `[lo, hi]` containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            let r = left + right;
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                let left = if i > 0 {
                    self.offdiag[i - 1].abs()
                } else {
                    0.0
                };
                let right = if i + 1 < n {
                    self.offdiag[i].abs()
                } else {
                    0.0
                };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// v^T T v.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                got: v.len(),
            });
        }
        let diag: f64 = self.diag.iter().zip(v).map(|(d, x)| d * x * x).sum();
        let off: f64 = self
            .offdiag
            .iter()
            .zip(v.windows(2))
            .map(|(e, w)| e * w[0] * w[1])
            .sum();
        Ok(diag + 2.0 * off)
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            if i + 1 < n {
                a[i][i + 1] = self.offdiag[i];
                a[i + 1][i] = self.offdiag[i];
            }
        }
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteParams {
    n: usize,
    beta: f64,
}

impl HermiteParams {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        check_beta(beta)?;
        Ok(Self { n, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when beta < 1: the model is valid, the small-deviation
    /// inequalities are only claimed for beta >= 1.
    pub fn below_inequality_range(&self) -> bool {
        self.beta < 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerreParams {
    n: usize,
    kappa: f64,
    beta: f64,
}

impl LaguerreParams {
    pub fn new(n: usize, kappa: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        check_beta(beta)?;
        if !kappa.is_finite() || kappa <= n as f64 - 1.0 {
            return Err(Error::Parameter(format!(
                "kappa must be finite and strictly greater than n - 1 = {}, got {kappa}",
                n - 1
            )));
        }
        Ok(Self { n, kappa, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn below_inequality_range(&self) -> bool {
        self.beta < 1.0
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Parameter(format!(
            "beta must be finite and > 0, got {beta}"
        )));
    }
    Ok(())
}

/// Parameter of `HermiteSample::chi[i]`: beta (n - k) with k = i + 1.
pub fn hermite_chi_param(n: usize, beta: f64, i: usize) -> f64 {
    beta * (n - 1 - i) as f64
}

/// Parameter of `LaguerreSample::chi[i]`: beta (kappa - k + 1) with k = i + 1.
pub fn laguerre_chi_param(kappa: f64, beta: f64, i: usize) -> f64 {
    beta * (kappa - i as f64)
}

/// Parameter of `LaguerreSample::chitilde[i]`: beta (n - k) with k = i + 1.
pub fn laguerre_chitilde_param(n: usize, beta: f64, i: usize) -> f64 {
    beta * (n - 1 - i) as f64
}

/// One draw of the Hermite model: raw noise plus the matrix built from it.
#[derive(Clone, Debug)]
pub struct HermiteSample {
    params: HermiteParams,
    g: Vec<f64>,
    chi: Vec<f64>,
}

impl HermiteSample {
    /// Assembles a sample from externally supplied noise.
    pub fn from_noise(params: HermiteParams, g: Vec<f64>, chi: Vec<f64>) -> Result<Self> {
        let n = params.n();
        if g.len() != n || chi.len() + 1 != n {
            return Err(Error::Input(format!(
                "hermite noise lengths ({}, {}) do not match n = {n}",
                g.len(),
                chi.len()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) || chi.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Input(
                "hermite noise must be finite, chi >= 0".into(),
            ));
        }
        Ok(Self { params, g, chi })
    }

    pub fn params(&self) -> HermiteParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn beta(&self) -> f64 {
        self.params.beta
    }

    /// Gaussian diagonal noise, each N(0, 2).
    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// Off-diagonal chi variables; see the module table for parameters.
    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn matrix(&self) -> SymTridiagonal {
        let s = 1.0 / self.params.beta.sqrt();
        SymTridiagonal::from_parts_unchecked(
            self.g.iter().map(|x| x * s).collect(),
            self.chi.iter().map(|x| x * s).collect(),
        )
    }

    /// Writes the matrix into `out`, reusing its allocation.
    pub fn matrix_into(&self, out: &mut SymTridiagonal) {
        let s = 1.0 / self.params.beta.sqrt();
        let (d, e) = out.parts_mut();
        d.clear();
        d.extend(self.g.iter().map(|x| x * s));
        e.clear();
        e.extend(self.chi.iter().map(|x| x * s));
    }
}

/// One draw of the Laguerre model B B^T with B lower bidiagonal.
#[derive(Clone, Debug)]
pub struct LaguerreSample {
    params: LaguerreParams,
    chi: Vec<f64>,
    chitilde: Vec<f64>,
}

impl LaguerreSample {
    pub fn from_noise(params: LaguerreParams, chi: Vec<f64>, chitilde: Vec<f64>) -> Result<Self> {
        let n = params.n();
        if chi.len() != n || chitilde.len() + 1 != n {
            return Err(Error::Input(format!(
                "laguerre noise lengths ({}, {}) do not match n = {n}",
                chi.len(),
                chitilde.len()
            )));
        }
        if chi
            .iter()
            .chain(chitilde.iter())
            .any(|x| !x.is_finite() || *x < 0.0)
        {
            return Err(Error::Input(
                "laguerre noise must be finite and >= 0".into(),
            ));
        }
        Ok(Self {
            params,
            chi,
            chitilde,
        })
    }

    pub fn params(&self) -> LaguerreParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn kappa(&self) -> f64 {
        self.params.kappa
    }

    pub fn beta(&self) -> f64 {
        self.params.beta
    }

    /// Diagonal of sqrt(beta) B.
    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    /// Sub-diagonal of sqrt(beta) B.
    pub fn chitilde(&self) -> &[f64] {
        &self.chitilde
    }

    /// Dense lower-bidiagonal B (for oracles and small n).
    pub fn bidiagonal_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let s = 1.0 / self.params.beta.sqrt();
        let mut b = vec![vec![0.0; n]; n];
        for i in 0..n {
            b[i][i] = self.chi[i] * s;
            if i + 1 < n {
                b[i + 1][i] = self.chitilde[i] * s;
            }
        }
        b
    }

    pub fn matrix(&self) -> SymTridiagonal {
        let mut out = SymTridiagonal::from_parts_unchecked(vec![0.0], Vec::new());
        self.matrix_into(&mut out);
        out
    }

    pub fn matrix_into(&self, out: &mut SymTridiagonal) {
        laguerre_matrix_into(self, out)
    }
}

pub fn sample_hermite(params: HermiteParams, stream: &mut RngStream) -> HermiteSample {
    let mut s = HermiteSample {
        params,
        g: Vec::with_capacity(params.n),
        chi: Vec::with_capacity(params.n.saturating_sub(1)),
    };
    resample_hermite(&mut s, stream);
    s
}

/// Redraws every entry of `s` from `stream`, keeping its parameters.
///
/// Draw order: all `g` first, then `chi` by increasing index.
pub fn resample_hermite(s: &mut HermiteSample, stream: &mut RngStream) {
    let n = s.params.n;
    let beta = s.params.beta;
    let sd = std::f64::consts::SQRT_2;
    s.g.clear();
    s.g.extend((0..n).map(|_| sd * stream.standard_normal()));
    s.chi.clear();
    s.chi.extend(
        (0..n.saturating_sub(1)).map(|i| chi_unchecked(stream, hermite_chi_param(n, beta, i))),
    );
}

pub fn sample_laguerre(params: LaguerreParams, stream: &mut RngStream) -> LaguerreSample {
    let mut s = LaguerreSample {
        params,
        chi: Vec::with_capacity(params.n),
        chitilde: Vec::with_capacity(params.n.saturating_sub(1)),
    };
    resample_laguerre(&mut s, stream);
    s
}

/// Draw order: all `chi` first, then `chitilde`.
pub fn resample_laguerre(s: &mut LaguerreSample, stream: &mut RngStream) {
    let LaguerreParams { n, kappa, beta } = s.params;
    s.chi.clear();
    s.chi
        .extend((0..n).map(|i| chi_unchecked(stream, laguerre_chi_param(kappa, beta, i))));
    s.chitilde.clear();
    s.chitilde.extend(
        (0..n.saturating_sub(1))
            .map(|i| chi_unchecked(stream, laguerre_chitilde_param(n, beta, i))),
    );
}

/// L = B B^T as a symmetric tridiagonal matrix.
pub fn laguerre_matrix(s: &LaguerreSample) -> SymTridiagonal {
    s.matrix()
}

fn laguerre_matrix_into(s: &LaguerreSample, out: &mut SymTridiagonal) {
    let n = s.n();
    let inv_beta = 1.0 / s.beta();
    let (d, e) = out.parts_mut();
    d.clear();
    e.clear();
    for i in 0..n {
        let mut v = s.chi[i] * s.chi[i];
        if i > 0 {
            v += s.chitilde[i - 1] * s.chitilde[i - 1];
        }
        d.push(v * inv_beta);
    }
    for i in 0..n.saturating_sub(1) {
        e.push(s.chi[i] * s.chitilde[i] * inv_beta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_shape_checks() {
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![f64::INFINITY]).is_err());
        let t = SymTridiagonal::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.gershgorin(), (0.5, 2.5));
        assert_eq!(t.norm(), 2.5);
    }

    #[test]
    fn params_validation() {
        assert!(HermiteParams::new(0, 1.0).is_err());
        assert!(HermiteParams::new(3, 0.0).is_err());
        assert!(HermiteParams::new(3, 0.5).unwrap().below_inequality_range());
        assert!(LaguerreParams::new(3, 2.0, 1.0).is_err());
        assert!(LaguerreParams::new(3, 2.0 + 1e-9, 1.0).is_ok());
        assert!(LaguerreParams::new(3, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn hermite_n1_is_single_gaussian() {
        let p = HermiteParams::new(1, 2.0).unwrap();
        let s = sample_hermite(p, &mut RngStream::new(4, 0));
        assert!(s.chi().is_empty());
        let m = s.matrix();
        assert_eq!(m.diag(), &[s.g()[0] / 2f64.sqrt()]);
        assert!(m.offdiag().is_empty());
    }

    #[test]
    fn hermite_matrix_reconstruction() {
        let p = HermiteParams::new(7, 3.0).unwrap();
        let s = sample_hermite(p, &mut RngStream::new(4, 1));
        let m = s.matrix();
        let r = 1.0 / 3f64.sqrt();
        for i in 0..7 {
            assert_eq!(m.diag()[i], s.g()[i] * r);
        }
        for i in 0..6 {
            assert_eq!(m.offdiag()[i], s.chi()[i] * r);
        }
        // matrix() is a pure function of the stored noise
        assert_eq!(m, s.matrix());
    }

    #[test]
    fn laguerre_parameter_bookkeeping() {
        let (n, kappa, beta) = (3, 5.0, 2.0);
        let chi: Vec<f64> = (0..n).map(|i| laguerre_chi_param(kappa, beta, i)).collect();
        let chit: Vec<f64> = (0..n - 1)
            .map(|i| laguerre_chitilde_param(n, beta, i))
            .collect();
        assert_eq!(chi, vec![10.0, 8.0, 6.0]);
        assert_eq!(chit, vec![4.0, 2.0]);
        let h: Vec<f64> = (0..n - 1).map(|i| hermite_chi_param(n, beta, i)).collect();
        assert_eq!(h, vec![4.0, 2.0]);
    }

    #[test]
    fn laguerre_n1() {
        let p = LaguerreParams::new(1, 0.5, 2.0).unwrap();
        let s = sample_laguerre(p, &mut RngStream::new(2, 2));
        assert_eq!(s.chi().len(), 1);
        assert!(s.chitilde().is_empty());
        let m = laguerre_matrix(&s);
        assert_eq!(m.diag(), &[s.chi()[0] * s.chi()[0] / 2.0]);
    }

    #[test]
    fn laguerre_matrix_is_b_bt() {
        let p = LaguerreParams::new(3, 4.3, 1.5).unwrap();
        let s = sample_laguerre(p, &mut RngStream::new(11, 5));
        let b = s.bidiagonal_dense();
        let l = laguerre_matrix(&s).to_dense();
        for i in 0..3 {
            for j in 0..3 {
                let bbt: f64 = (0..3).map(|k| b[i][k] * b[j][k]).sum();
                let scale = bbt.abs().max(1e-300);
                assert!((bbt - l[i][j]).abs() <= 1e-14 * scale.max(1.0), "({i},{j})");
            }
        }
    }

    #[test]
    fn from_noise_validation() {
        let p = HermiteParams::new(2, 1.0).unwrap();
        assert!(HermiteSample::from_noise(p, vec![0.0, 1.0], vec![0.5]).is_ok());
        assert!(HermiteSample::from_noise(p, vec![0.0], vec![0.5]).is_err());
        assert!(HermiteSample::from_noise(p, vec![0.0, 1.0], vec![-0.5]).is_err());
        let q = LaguerreParams::new(2, 3.0, 1.0).unwrap();
        assert!(LaguerreSample::from_noise(q, vec![1.0, 1.0], vec![1.0]).is_ok());
        assert!(LaguerreSample::from_noise(q, vec![1.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn quadratic_form_matches_dense() {
        let t = SymTridiagonal::new(vec![1.0, -2.0, 3.0], vec![0.5, -1.5]).unwrap();
        let v = [0.3, -1.1, 2.0];
        let a = t.to_dense();
        let dense: f64 = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| v[i] * a[i][j] * v[j])
            .sum();
        assert!((t.quadratic_form(&v).unwrap() - dense).abs() < 1e-14);
        assert!(t.quadratic_form(&[1.0]).is_err());
    }
}
