use crate::{Error, Result};

/// Partial sums `S_0..=S_len` of `s` zero-extended to length `len`.
fn partial_sums(s: &[f64], len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for j in 0..len {
        acc += s.get(j).copied().unwrap_or(0.0);
        out.push(acc);
    }
    out
}

/// Both sides of the windowed summation-by-parts identity
///
/// ```text
/// sum_{k=1}^n s_k t_k = (1/m) sum_{k=1}^n [S_{k+m-1} - S_{k-1}] t_k
///                     + sum_{k=0}^n ((1/m) sum_{l=k}^{k+m-1} [S_l - S_k]) (t_{k+1} - t_k)
/// ```
///
/// with `t_0 = t_{n+1} = 0` and `s` zero-extended past its end.
pub fn sum_by_parts(s: &[f64], t: &[f64], m: usize) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(Error::Parameter("window m must be >= 1".into()));
    }
    let n = t.len();
    let big_s = partial_sums(s, n + m);
    let tt = |k: usize| -> f64 {
        if k == 0 || k > n {
            0.0
        } else {
            t[k - 1]
        }
    };
    let lhs: f64 = t
        .iter()
        .enumerate()
        .map(|(i, x)| s.get(i).copied().unwrap_or(0.0) * x)
        .sum();
    let inv_m = 1.0 / m as f64;
    let mut first = 0.0;
    for k in 1..=n {
        first += (big_s[k + m - 1] - big_s[k - 1]) * tt(k);
    }
    let mut second = 0.0;
    for k in 0..=n {
        let window: f64 = (k..k + m).map(|l| big_s[l] - big_s[k]).sum();
        second += inv_m * window * (tt(k + 1) - tt(k));
    }
    Ok((lhs, inv_m * first + second))
}

/// `Delta_m(k) = max_{k+1 <= l <= k+m} |S_l - S_k|` over the zero-extended sums.
pub fn delta_m(s: &[f64], m: usize, k: usize) -> f64 {
    let big_s = partial_sums(s, k + m);
    (k + 1..=k + m)
        .map(|l| (big_s[l] - big_s[k]).abs())
        .fold(0.0, f64::max)
}
