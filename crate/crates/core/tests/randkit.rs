#![allow(clippy::excessive_precision, clippy::approx_constant)]

use betatri::randkit::{
    chi_mean_deficit, chi_moment, log_gamma, mean_chi, sample_chi, sample_gamma, sample_gaussian,
    RngStream,
};
use proptest::prelude::*;

// ln Gamma(x) at 30 digits, from an arbitrary-precision reference
const LGAMMA: [(f64, f64); 27] = [
    (0.001, 6.9071788853838536825),
    (0.01, 4.5994798780420217225),
    (0.1, 2.2527126517342059599),
    (0.5, 0.57236494292470008707),
    (0.9, 0.066376239734742971189),
    (0.99, 0.0058548067647097761793),
    (1.01, -0.005690307946069645522),
    (1.2, -0.08537409000331584972),
    (1.5, -0.12078223763524522235),
    (1.9, -0.038984275923083330039),
    (1.999, -0.00042246180069215377611),
    (2.001, 0.00042310673480016362518),
    (2.5, 0.28468287047291915963),
    (3.0, 0.69314718055994530942),
    (3.7, 1.4280723266653879219),
    (5.0, 3.1780538303479456196),
    (7.25, 7.0521854507385394449),
    (9.99, 12.77931521435019288),
    (10.0, 12.801827480081469611),
    (12.5, 18.734347511936445702),
    (33.3, 82.603723581654952928),
    (100.0, 359.13420536957539878),
    (1000.0, 5905.2204232091812118),
    (12345.678, 103959.91990554606092),
    (1e6, 12815504.56914761166),
    (3e7, 486501230.49937745055),
    (1e8, 1742068066.1038347093),
];

#[test]
fn log_gamma_matches_reference_table() {
    for (x, want) in LGAMMA {
        let got = log_gamma(x).unwrap();
        let err = (got - want).abs() / want.abs().max(1e-3);
        assert!(err <= 1e-12, "x = {x}: {got} vs {want} ({err:e})");
    }
}

#[test]
fn log_gamma_rejects_nonpositive() {
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
    assert!(log_gamma(f64::NAN).is_err());
}

#[test]
fn mean_chi_reference_values() {
    // sqrt(2) Gamma((r+1)/2) / Gamma(r/2)
    for (r, want) in [
        (1.0, 0.79788456080286535588),
        (2.0, 1.2533141373155002512),
        (3.7, 1.7992341432647724244),
    ] {
        assert!((mean_chi(r).unwrap() - want).abs() < 1e-13 * want);
    }
}

#[test]
fn mean_chi_bounds_on_r_grid() {
    for i in 0..=160 {
        let r = 10f64.powf(i as f64 / 20.0);
        let m = mean_chi(r).unwrap();
        assert!(m <= r.sqrt(), "r = {r}");
        let gap = chi_mean_deficit(r).unwrap();
        assert!(gap <= 0.5 / (r.sqrt() + (r - 0.5).sqrt()), "r = {r}");
        assert!(gap >= 0.0);
    }
}

#[test]
fn chi_moments_match_sampling() {
    let mut st = RngStream::new(3, 0);
    for r in [0.3, 1.0, 2.5, 17.0, 400.0] {
        let m = 200_000;
        let xs: Vec<f64> = (0..m).map(|_| sample_chi(&mut st, r).unwrap()).collect();
        for p in 1..=4u32 {
            let want = chi_moment(r, p).unwrap();
            let vals: Vec<f64> = xs.iter().map(|x| x.powi(p as i32)).collect();
            let mean = vals.iter().sum::<f64>() / m as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            let se = (var / m as f64).sqrt();
            assert!(
                (mean - want).abs() <= 5.0 * se,
                "r = {r}, p = {p}: {mean} vs {want}"
            );
        }
        // second moment of chi_r is r
        assert!((chi_moment(r, 2).unwrap() - r).abs() < 1e-12 * r);
    }
}

#[test]
fn gamma_shape_below_one_has_right_mean() {
    let mut st = RngStream::new(4, 0);
    let m = 400_000;
    let shape = 0.05;
    let s: f64 = (0..m).map(|_| sample_gamma(&mut st, shape).unwrap()).sum();
    let se = (shape / m as f64).sqrt();
    assert!((s / m as f64 - shape).abs() < 5.0 * se);
}

#[test]
fn gaussian_absolute_exponential_moment() {
    // E exp|g| = 2 e^{1/2} Phi(1) for g ~ N(0, 1)
    let want = 2.7742859576700095503;
    let mut st = RngStream::new(5, 0);
    let m = 400_000;
    let vals: Vec<f64> = (0..m)
        .map(|_| sample_gaussian(&mut st, 0.0, 1.0).abs().exp())
        .collect();
    let mean = vals.iter().sum::<f64>() / m as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    assert!((mean - want).abs() < 5.0 * (var / m as f64).sqrt());
}

#[test]
fn sibling_streams_are_uncorrelated() {
    let m = 100_000;
    let mut a = RngStream::new(9, 0);
    let mut b = RngStream::new(9, 1);
    let c: f64 = (0..m)
        .map(|_| a.standard_normal() * b.standard_normal())
        .sum::<f64>()
        / m as f64;
    assert!(c.abs() < 5.0 / (m as f64).sqrt());
}

#[test]
fn stream_replays_exactly() {
    let mut a = RngStream::new(42, 7);
    let mut b = RngStream::new(42, 7);
    for _ in 0..1000 {
        assert_eq!(a.next_u64(), b.next_u64());
    }
    assert_eq!(a.position(), b.position());
}

proptest! {
    #[test]
    fn log_gamma_recurrence(x in 0.01f64..200.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn uniform_open0_is_in_range(seed in any::<u64>(), id in any::<u64>()) {
        let mut st = RngStream::new(seed, id);
        for _ in 0..64 {
            let u = st.uniform_open0();
            prop_assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn chi_draws_are_positive(r in 0.01f64..1e6, seed in any::<u64>()) {
        let mut st = RngStream::new(seed, 0);
        prop_assert!(sample_chi(&mut st, r).unwrap() > 0.0);
    }
}
