use crate::ensembles::SymTridiagonal;
use crate::{Error, Result};

/// Size guard for the O(n^3) oracle.
pub const DENSE_ORACLE_MAX_N: usize = 512;

/// Full spectrum, ascending, by cyclic Jacobi rotations on the dense matrix.
///
/// Slow and independent of the Sturm/bisection path; intended as a test
/// oracle for n up to a few hundred.
pub fn dense_eigen_oracle(t: &SymTridiagonal) -> Result<Vec<f64>> {
    let n = t.n();
    if n > DENSE_ORACLE_MAX_N {
        return Err(Error::Guard {
            n,
            limit: DENSE_ORACLE_MAX_N,
        });
    }
    let mut a = t.to_dense();
    let mut eig = jacobi_symmetric(&mut a);
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// Eigenvalues of a dense symmetric matrix (destroys `a`).
#[allow(clippy::needless_range_loop)]
pub(crate) fn jacobi_symmetric(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let tt = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let tt = if theta == 0.0 { 1.0 } else { tt };
                let c = 1.0 / (tt * tt + 1.0).sqrt();
                let s = tt * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let d = SymTridiagonal::new(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(dense_eigen_oracle(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        let a = SymTridiagonal::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        let e = dense_eigen_oracle(&a).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_spectrum() {
        // eigenvalues of the path-graph adjacency: 2 cos(k pi / (n + 1))
        let n = 12;
        let t = SymTridiagonal::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
        let e = dense_eigen_oracle(&t).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(|x, y| x.total_cmp(y));
        for (x, y) in e.iter().zip(&exact) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn guard() {
        let n = DENSE_ORACLE_MAX_N + 1;
        let t = SymTridiagonal::new(vec![0.0; n], vec![0.0; n - 1]).unwrap();
        assert!(matches!(dense_eigen_oracle(&t), Err(Error::Guard { .. })));
    }
}
