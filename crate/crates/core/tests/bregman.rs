use hardy_core::bregman::{
    bregman_f, comparability_ratio, comparability_scan, signed_pow, ComparabilityGrid,
};
use proptest::prelude::*;

fn spow(a: f64, k: f64) -> f64 {
    signed_pow(a, k).unwrap()
}

#[test]
fn square_grid_bracket_for_p3() {
    let circle = comparability_scan(3.0, &ComparabilityGrid::default()).unwrap();
    let square = comparability_scan(
        3.0,
        &ComparabilityGrid::Square {
            lo: -5.0,
            hi: 5.0,
            n: 101,
        },
    )
    .unwrap();
    assert!(circle.c_lower > 0.0 && circle.c_lower <= circle.c_upper);
    // The ratio is 0-homogeneous, so the refined circle bracket contains every
    // square-grid value.
    assert!(square.c_lower >= circle.c_lower * (1.0 - 1e-12));
    assert!(square.c_upper <= circle.c_upper * (1.0 + 1e-12));
    // limit values: 2(p-1)/p at a = b, p/2 at b = -a
    assert!(circle.c_lower <= 4.0 / 3.0 + 1e-12);
    assert!(circle.c_upper >= 1.5 - 1e-12);
}

#[test]
fn hundred_thousand_random_triples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let ps = [1.25, 1.5, 2.0, 3.0, 5.0];
    let scans: Vec<_> = ps
        .iter()
        .map(|&p| comparability_scan(p, &ComparabilityGrid::default()).unwrap())
        .collect();
    let mut violations = 0;
    for _ in 0..100_000 {
        let k = rng.random_range(0..ps.len());
        let p = ps[k];
        let a: f64 = rng.random_range(-10.0..10.0);
        let b: f64 = rng.random_range(-10.0..10.0);
        if a == b {
            continue;
        }
        let sym = bregman_f(p, a, b) + bregman_f(p, b, a);
        let exact = p * (b - a) * (spow(b, p - 1.0) - spow(a, p - 1.0));
        if (sym - exact).abs() > 1e-12 * exact.abs().max(1e-300) * 10.0 {
            violations += 1;
        }
        if !scans[k].contains(a, b, 1e-12) {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

proptest! {
    #[test]
    fn divergence_is_nonnegative(p in 1.01f64..6.0, a in -50.0f64..50.0, b in -50.0f64..50.0) {
        prop_assert!(bregman_f(p, a, b) >= 0.0);
    }

    #[test]
    fn symmetrization_identity(p in 1.01f64..6.0, a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let lhs = bregman_f(p, a, b) + bregman_f(p, b, a);
        let rhs = p * (b - a) * (spow(b, p - 1.0) - spow(a, p - 1.0));
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn homogeneity(p in 1.1f64..5.0, a in -5.0f64..5.0, b in -5.0f64..5.0, l in 0.1f64..10.0) {
        let f = bregman_f(p, a, b);
        let g = bregman_f(p, l * a, l * b);
        prop_assert!((g - l.powf(p) * f).abs() <= 1e-10 * (1.0 + g.abs()));
        prop_assume!(a != b);
        let r1 = comparability_ratio(p, a, b);
        let r2 = comparability_ratio(p, -l * a, -l * b);
        prop_assert!((r1 - r2).abs() <= 1e-9 * r1);
    }

    #[test]
    fn p2_ratio_is_one(a in -100.0f64..100.0, b in -100.0f64..100.0) {
        prop_assume!((a - b).abs() > 1e-9);
        prop_assert!((comparability_ratio(2.0, a, b) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn signed_power_is_odd(a in -1e3f64..1e3, k in 0.01f64..5.0) {
        prop_assert_eq!(spow(-a, k), -spow(a, k));
        prop_assert!((spow(spow(a, k), 1.0 / k) - a).abs() <= 1e-10 * (1.0 + a.abs()));
    }
}
