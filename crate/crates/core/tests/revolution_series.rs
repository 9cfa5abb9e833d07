use std::f64::consts::PI;
use std::sync::Arc;

use dirichlet_core::audit::random_polynomial_laminas;
use dirichlet_core::math::gcd;
use dirichlet_core::revolution::{cylinder_volume_sum, eta_implied, pappus_check, simpson_order_check, Lamina};
use dirichlet_core::series::{
    cos_log_antiderivative, default_checkpoints, growth_exponent, transient_free_checkpoints,
    trig_log_partial_sums, Family,
};
use dirichlet_core::{enumerate_characters, SPoint};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pappus_on_random_cubics() {
    for (f, g, lam) in random_polynomial_laminas(99, 100).unwrap() {
        assert!((0..=100).all(|i| {
            let z = i as f64 / 100.0;
            let p = |c: [f64; 4]| c[0] + z * (c[1] + z * (c[2] + z * c[3]));
            p(f) > p(g) && p(g) >= 0.0
        }));
        let r = pappus_check(&lam).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }
}

#[test]
fn simpson_volume_error_shrinks_like_fourth_order() {
    let lam = Lamina::new(
        Arc::new(|z: f64| Complex64::new(1.0 + z.sin(), 0.0)),
        Arc::new(|_| Complex64::new(0.0, 0.0)),
        0.0,
        2.0,
        8,
    )
    .unwrap();
    // pi int_0^2 (1 + sin z)^2 dz
    let exact = Complex64::new(PI * (5.0 - 2.0 * 2f64.cos() - 4f64.sin() / 4.0), 0.0);
    let o = simpson_order_check(&lam, exact).unwrap();
    assert!(o.ratio >= 8.0, "{o:?}");
}

#[test]
fn cylinder_sum_matches_direct_sum() {
    let s_points = [SPoint::new(0.5, 6.0).unwrap(), SPoint::new(1.2, -2.0).unwrap()];
    for q in 1..=20u64 {
        for chi in enumerate_characters(q).unwrap() {
            for s in s_points {
                for n_terms in [1usize, 10, 1000] {
                    let mut direct = Complex64::new(0.0, 0.0);
                    for n in 1..=n_terms as u64 {
                        if gcd(n, q) != 1 {
                            continue;
                        }
                        let v = chi.value(n as i64).to_complex();
                        direct += v * v * (-2.0 * s.to_complex() * (n as f64).ln()).exp();
                    }
                    let got = cylinder_volume_sum(&chi, s, n_terms).unwrap();
                    assert!((got - PI * direct).norm() < 1e-12 * (1.0 + direct.norm()), "{chi} N={n_terms}");
                }
            }
        }
    }
}

#[test]
fn eta_is_defined_away_from_zeros() {
    let chi = dirichlet_core::DirichletCharacter::from_index(4, 1).unwrap();
    let e = eta_implied(&chi, SPoint::new(2.0, 0.0).unwrap(), 100).unwrap();
    assert!(e.eta.is_some());
}

#[test]
fn exact_at_t_zero() {
    let cps: Vec<u64> = vec![1, 7, 10, 1000, 99_999, 100_000];
    let p = trig_log_partial_sums(0.0, &cps).unwrap();
    for c in &p.checkpoints {
        assert!((c.s_cos - c.n as f64).abs() < 1e-9);
        assert_eq!(c.s_sin, 0.0);
    }
}

#[test]
fn two_path_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cps = vec![10u64, 1000, 20_000];
    for _ in 0..20 {
        let t: f64 = rng.gen_range(-5.0..5.0);
        let p = trig_log_partial_sums(t, &cps).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = 0;
        for n in 1..=*cps.last().unwrap() {
            acc += Complex64::new(0.0, -4.0 * t * (n as f64).ln()).exp();
            if n == cps[k] {
                let c = &p.checkpoints[k];
                let got = Complex64::new(c.s_cos, -c.s_sin);
                assert!((got - acc).norm() < 1e-9, "t={t} N={n}: {got} vs {acc}");
                k += 1;
            }
        }
    }
}

#[test]
fn growth_on_decade_checkpoints() {
    for i in 0..20 {
        let t = 0.1 + 4.9 * i as f64 / 19.0;
        let p = trig_log_partial_sums(t, &default_checkpoints()).unwrap();
        let slope = growth_exponent(&p, Family::Cos).unwrap().slope;
        assert!(slope >= 0.8, "t={t}: {slope}");
    }
}

#[test]
fn growth_near_one_past_the_transient() {
    for i in 0..20 {
        let t = 0.1 + 4.9 * i as f64 / 19.0;
        let p = trig_log_partial_sums(t, &transient_free_checkpoints(t, 100_000)).unwrap();
        let slope = growth_exponent(&p, Family::Cos).unwrap().slope;
        assert!((0.9..=1.1).contains(&slope), "t={t}: {slope}");
    }
}

proptest! {
    #[test]
    fn antiderivative_bound(t in -5.0f64..5.0, w in 1.0f64..1e6) {
        let k = 1.0 + 16.0 * t * t;
        let f = cos_log_antiderivative(t, w).unwrap();
        prop_assert!(f.abs() <= w * k.sqrt() / k + 1.0);
    }
}
