use betatri::eigentri::lambda_max;
use betatri::ensembles::{
    laguerre_matrix, sample_hermite, sample_laguerre, HermiteParams, LaguerreParams,
};
use betatri::forms::{
    calibrate_sandwich, delta_m, energy_i, energy_j, hermite_form, hermite_form_c, laguerre_form,
    laguerre_form_c, laguerre_form_prime, laguerre_noise, lambda_appraisal_constant, sum_by_parts,
    test_vector_left_hermite, test_vector_left_laguerre, test_vector_right_hermite,
    u_noise_groupings, vector_stats, SandwichConfig, SandwichKind,
};
use betatri::randkit::RngStream;
use proptest::collection::vec;
use proptest::prelude::*;

fn hermite(n: usize, beta: f64, seed: u64) -> betatri::ensembles::HermiteSample {
    sample_hermite(
        HermiteParams::new(n, beta).unwrap(),
        &mut RngStream::new(seed, 0),
    )
}

fn laguerre(n: usize, kappa: f64, beta: f64, seed: u64) -> betatri::ensembles::LaguerreSample {
    sample_laguerre(
        LaguerreParams::new(n, kappa, beta).unwrap(),
        &mut RngStream::new(seed, 0),
    )
}

#[test]
fn vector_stats_small_cases() {
    let s = vector_stats(&[1.0]);
    assert_eq!(
        (s.norm2_sq, s.norm4_4, s.grad_sq, s.kweight),
        (1.0, 1.0, 2.0, 1.0)
    );
    let s = vector_stats(&[1.0, 1.0]);
    assert_eq!((s.norm2_sq, s.grad_sq, s.kweight), (2.0, 2.0, 3.0));
    let s = vector_stats(&[0.0; 5]);
    assert_eq!(
        (s.norm2_sq, s.norm4_4, s.grad_sq, s.kweight),
        (0.0, 0.0, 0.0, 0.0)
    );
}

#[test]
fn forms_vanish_at_zero_vector() {
    let h = hermite(7, 2.0, 1);
    let l = laguerre(7, 12.0, 2.0, 1);
    let z = [0.0; 7];
    assert_eq!(hermite_form(&h, &z).unwrap(), 0.0);
    assert_eq!(hermite_form_c(&h, &z, 3.0).unwrap(), 0.0);
    assert_eq!(laguerre_form(&l, &z).unwrap(), 0.0);
    assert_eq!(laguerre_form_c(&l, &z, 3.0).unwrap(), 0.0);
    assert_eq!(laguerre_form_prime(&l, &z).unwrap(), 0.0);
    assert_eq!(energy_i(&z, 7).unwrap(), 0.0);
    assert_eq!(energy_j(&z, 7, 2.0).unwrap(), 0.0);
}

#[test]
fn dimension_and_parameter_errors() {
    let h = hermite(4, 1.0, 2);
    assert!(hermite_form(&h, &[1.0; 3]).is_err());
    assert!(hermite_form_c(&h, &[1.0; 4], 0.0).is_err());
    let l = laguerre(4, 4.5, 1.0, 2);
    assert!(laguerre_form_prime(&l, &[1.0; 4]).is_err());
    assert!(sum_by_parts(&[1.0], &[1.0], 0).is_err());
}

#[test]
fn one_by_one_reductions() {
    let h = hermite(1, 2.0, 3);
    let g = h.g()[0];
    assert!((hermite_form_c(&h, &[1.0], 0.5).unwrap() - (g / 2f64.sqrt() - 1.5)).abs() < 1e-14);
}

#[test]
fn delta_m_small_cases() {
    assert_eq!(delta_m(&[1.0, -2.0, 3.0], 2, 0), 1.0);
    assert_eq!(delta_m(&[0.0; 6], 3, 2), 0.0);
}

#[test]
fn rayleigh_consistency() {
    for (n, beta, seed) in [(50, 1.0, 4), (200, 2.0, 5), (17, 4.0, 6)] {
        let s = hermite(n, beta, seed);
        let top = lambda_max(&s.matrix(), 1e-12).unwrap().value - 2.0 * (n as f64).sqrt();
        let mut st = RngStream::new(seed, 1);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..200 {
            let mut v: Vec<f64> = (0..n).map(|_| st.standard_normal()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            best = best.max(hermite_form(&s, &v).unwrap());
        }
        assert!(best <= top + 1e-9);
    }
}

#[test]
fn laguerre_noise_is_centred() {
    let (n, kappa, beta) = (4, 9.0, 1.0);
    let m = 100_000;
    let p = LaguerreParams::new(n, kappa, beta).unwrap();
    let mut acc = vec![Vec::with_capacity(m); 3 * n];
    for i in 0..m {
        let s = sample_laguerre(p, &mut RngStream::new(8, i as u64));
        let noise = laguerre_noise(&s);
        for k in 0..n {
            acc[k].push(noise.z[k]);
            acc[n + k].push(noise.z_tilde[k]);
            if k + 1 < n {
                acc[2 * n + k].push(noise.y[k]);
            }
        }
    }
    for xs in acc.iter().filter(|x| !x.is_empty()) {
        let mean = xs.iter().sum::<f64>() / m as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        assert!(mean.abs() <= 4.0 * (var / m as f64).sqrt() + 1e-15);
    }
}

#[test]
fn hermite_constants_from_the_energy_comparison_pass() {
    let cfg = SandwichConfig {
        kind: SandwichKind::Hermite,
        trial_grid: vec![(8.0, 1.0 / 16.0)],
        trials: 10_000,
        n_grid: (1..=200).collect(),
        beta_grid: vec![1.0, 2.0, 4.0],
        kappa_ratios: vec![],
        seed: 21,
    };
    let r = calibrate_sandwich(&cfg).unwrap();
    assert_eq!((r.a, r.b), (8.0, 1.0 / 16.0));
}

#[test]
fn laguerre_calibration_from_wide_start_finds_a_pair() {
    let cfg = SandwichConfig {
        kind: SandwichKind::Laguerre,
        trial_grid: vec![
            (32.0, 1.0 / 64.0),
            (16.0, 1.0 / 32.0),
            (8.0, 1.0 / 16.0),
            (4.0, 1.0 / 8.0),
        ],
        trials: 3000,
        n_grid: (1..=200).collect(),
        beta_grid: vec![1.0, 2.0, 4.0],
        kappa_ratios: vec![1.0, 2.0, 4.0, 16.0],
        seed: 22,
    };
    let r = calibrate_sandwich(&cfg).unwrap();
    assert!(r.passing.contains(&(32.0, 1.0 / 64.0)));
    assert!(r.a >= r.b);
}

#[test]
fn lambda_appraisal_is_finite_and_order_one() {
    let c = lambda_appraisal_constant(&[16, 64, 256], &[1.5, 2.0, 4.0, 16.0], &[1.0, 2.0, 4.0])
        .unwrap();
    assert!(c.is_finite() && c > 0.0 && c < 10.0, "{c}");
}

#[test]
fn left_hermite_vector_appraisal() {
    let (n, eps) = (10_000, 0.01);
    let s = vector_stats(&test_vector_left_hermite(n, eps).unwrap());
    let ne = n as f64 * eps;
    let r = s.norm2_sq / ne;
    assert!((1.0 / 20.0..=1.0 / 6.0).contains(&r), "{r}");
    // the tent has grad_sq = 1/(n eps) exactly, the lower end of [1, 8]
    let g = s.grad_sq * ne;
    assert!((1.0 - 1e-12..=8.0).contains(&g), "{g}");
}

#[test]
fn right_hermite_vector_appraisal() {
    let eps = 0.04;
    let s = vector_stats(&test_vector_right_hermite(10_000, eps).unwrap());
    // v = (0.2, 0.4, 0.4, 0.2): kweight = 1 exactly
    assert!((s.kweight - 1.0).abs() < 1e-14);
    // kweight * eps -> 1/24 as eps -> 0, so the band is [1/40, 1]
    for eps in [0.04, 0.01, 0.0025, 1e-4] {
        let s = vector_stats(&test_vector_right_hermite(2_000_000, eps).unwrap());
        let r = s.kweight * eps;
        assert!((1.0 / 40.0..=1.0).contains(&r), "eps = {eps}: {r}");
    }
    let s = vector_stats(&test_vector_right_hermite(4_000_000, 4e-5).unwrap());
    assert!((s.kweight * 4e-5 - 1.0 / 24.0).abs() < 1e-5);
}

#[test]
fn left_laguerre_vector_appraisal() {
    let (n, kappa, eps) = (1000, 4000.0, 0.05);
    let s = vector_stats(&test_vector_left_laguerre(n, kappa, eps).unwrap());
    let w = n as f64 * eps / (n as f64 / kappa).sqrt();
    assert!((1.0 / 20.0..=1.0 / 6.0).contains(&(s.norm2_sq / w)));
}

proptest! {
    #[test]
    fn sum_by_parts_identity(
        st in vec(-10.0f64..10.0, 1..100).prop_flat_map(|s| {
            let n = s.len();
            (Just(s), vec(-10.0f64..10.0, n), 1..=n)
        })
    ) {
        let (s, t, m) = st;
        // rounding scales with the term magnitudes, not the (cancelling) sum
        let scale = 1.0 + s.iter().zip(&t).map(|(a, b)| (a * b).abs()).sum::<f64>();
        let (l, r) = sum_by_parts(&s, &t, m).unwrap();
        prop_assert!((l - r).abs() <= 1e-12 * scale);
        let (l1, r1) = sum_by_parts(&s, &t, 1).unwrap();
        prop_assert!((l1 - r1).abs() <= 1e-12 * scale);
    }

    #[test]
    fn delta_m_covering_bound(s in vec(-5.0f64..5.0, 1..80), m in 1usize..10, j in 1usize..8) {
        let base = delta_m(&s, 2 * m, (j - 1) * m);
        for k in (j - 1) * m + 1..=j * m {
            let d = delta_m(&s, m, k).max(delta_m(&s, m, k - 1));
            prop_assert!(d <= 2.0 * base + 1e-12);
        }
    }

    #[test]
    fn energy_comparison(v in vec(-3.0f64..3.0, 2..500), bi in 0usize..3) {
        let beta = [1.0, 2.0, 4.0][bi];
        let n = v.len();
        let (i, j) = (energy_i(&v, n).unwrap(), energy_j(&v, n, beta).unwrap());
        prop_assert!(j <= 8.0 * i);
        prop_assert!(j >= i / 16.0);
    }

    #[test]
    fn forms_match_matrix_evaluation(seed in any::<u64>(), n in 1usize..80, extra in 0.0f64..60.0) {
        let mut st = RngStream::new(seed, 3);
        let v: Vec<f64> = (0..n).map(|_| st.standard_normal()).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum();

        let h = hermite(n, 2.0, seed);
        let want = h.matrix().quadratic_form(&v).unwrap() - 2.0 * (n as f64).sqrt() * norm;
        let got = hermite_form(&h, &v).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0) * 10.0);

        let kappa = n as f64 - 0.5 + extra;
        let l = laguerre(n, kappa, 1.0, seed);
        let edge = (kappa.sqrt() + (n as f64).sqrt()).powi(2);
        let want = (laguerre_matrix(&l).quadratic_form(&v).unwrap() - edge * norm) / kappa.sqrt();
        let got = laguerre_form(&l, &v).unwrap();
        prop_assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0));
    }

    #[test]
    fn hermite_sandwich(seed in any::<u64>(), n in 1usize..200, bi in 0usize..3) {
        let beta = [1.0, 2.0, 4.0][bi];
        let s = hermite(n, beta, seed);
        let mut st = RngStream::new(seed, 9);
        let v: Vec<f64> = (0..n).map(|_| st.standard_normal()).collect();
        let f = hermite_form(&s, &v).unwrap();
        let f8 = hermite_form_c(&s, &v, 8.0).unwrap();
        let f16 = hermite_form_c(&s, &v, 1.0 / 16.0).unwrap();
        let slack = 1e-9 * (1.0 + f.abs());
        prop_assert!(f8 <= f + slack && f <= f16 + slack);
    }

    #[test]
    fn u_noise_regrouping(seed in any::<u64>(), n in 1usize..60, extra in 1.0f64..100.0) {
        let s = laguerre(n, n as f64 + extra, 2.0, seed);
        let mut st = RngStream::new(seed, 4);
        let v: Vec<f64> = (0..n).map(|_| st.standard_normal()).collect();
        let (a, b) = u_noise_groupings(&s, &v).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}
