//! Exact binomial confidence intervals.

use crate::randkit::log_gamma;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..100_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` for `a, b > 0`.
pub(crate) fn inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = log_gamma(a + b).unwrap() - log_gamma(a).unwrap() - log_gamma(b).unwrap()
        + a * x.ln()
        + b * (-x).ln_1p();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

/// `x` with `I_x(a, b) = q`, by bisection.
fn inv_inc_beta(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inc_beta(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided 95% Clopper–Pearson interval for `hits` out of `samples`.
///
/// With zero hits the upper end is the one-sided 95% bound
/// `1 - 0.05^{1/samples}` (about `3 / samples`, the rule of three).
pub fn clopper_pearson(hits: u64, samples: u64) -> (f64, f64) {
    assert!(samples > 0 && hits <= samples);
    let (x, n) = (hits as f64, samples as f64);
    if hits == 0 {
        return (0.0, -(0.05f64.ln() / n).exp_m1());
    }
    let lo = inv_inc_beta(x, n - x + 1.0, 0.025);
    let hi = if hits == samples {
        1.0
    } else {
        inv_inc_beta(x + 1.0, n - x, 0.975)
    };
    (lo, hi)
}
