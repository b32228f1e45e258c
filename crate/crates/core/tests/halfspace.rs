use hardy_core::battery::halfspace_battery;
use hardy_core::halfspace::{
    decomposition_residual, extremal_sweep, form_ep, ground_state_residual, verify_halfspace,
    weighted_norm, TestFunction,
};
use hardy_core::{EngineConfig, HardyError, HardyParams};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// E_p and ∫|u|^p x^{-α} for the hat on [0.5, 1.5] peaking at 1, computed
// with mpmath (30 digits) from the double integral over the half-line.
const HAT_ORACLES: [(f64, f64, f64, f64); 3] = [
    (2.0, 0.5, 1.8260817363542527678, 0.33663686542693751199),
    (3.0, 1.5, 5.2307251420279814441, 0.25842401650113323151),
    (1.5, 1.2, 3.227230936028612379, 0.41857177923616218823),
];

#[test]
fn hat_against_reference_values() {
    let u = TestFunction::hat(0.5, 1.0, 1.5).unwrap();
    let cfg = EngineConfig::default();
    for (p, alpha, e_ref, n_ref) in HAT_ORACLES {
        let params = HardyParams::new(1, p, alpha).unwrap();
        let e = form_ep(&u, &params, &cfg).unwrap();
        let n = weighted_norm(&u, p, alpha, &cfg).unwrap();
        assert!(rel(e.value, e_ref) < 1e-7, "p={p} α={alpha}: {e:?} vs {e_ref}");
        assert!(e.error < 1e-5 * e_ref);
        assert!(rel(n.value, n_ref) < 1e-10, "{n:?} vs {n_ref}");
    }
}

#[test]
fn support_touching_the_boundary_is_rejected() {
    let u = TestFunction::hat(0.0, 0.5, 1.0).unwrap();
    let params = HardyParams::new(1, 2.0, 0.5).unwrap();
    let r = form_ep(&u, &params, &EngineConfig::default());
    assert!(matches!(r, Err(HardyError::Domain(_))), "{r:?}");
}

#[test]
fn ground_state_small_grid() {
    let cfg = EngineConfig::default();
    for alpha in [0.3, 0.8, 1.2, 1.7] {
        for beta in [-0.95, -0.5, 0.0, (alpha - 1.0) / 2.0, 0.9 * alpha, 0.999 * alpha] {
            for x in [0.1, 1.0, 7.0] {
                let r = ground_state_residual(beta, alpha, x, &cfg).unwrap();
                assert!(r <= 1e-6, "α={alpha} β={beta} x={x}: {r}");
            }
        }
    }
    assert!(ground_state_residual(1.0, 0.5, 1.0, &cfg).is_err());
}

#[test]
fn decomposition_on_bumps() {
    let cfg = EngineConfig::default();
    for (p, alpha) in [(1.5, 0.5), (3.0, 1.5)] {
        let params = HardyParams::new(1, p, alpha).unwrap();
        let u = TestFunction::bump(0.2, 1.3).unwrap();
        let c = decomposition_residual(&u, &params, params.beta(), &cfg).unwrap();
        assert!(c.relative_gap <= 1e-4, "{c:?}");
        assert!(c.remainder.value >= -c.remainder.error);
    }
}

#[test]
fn battery_passes() {
    let cfg = EngineConfig::default();
    let params = HardyParams::new(1, 2.5, 1.3).unwrap();
    for u in halfspace_battery(12, 3).unwrap() {
        let r = verify_halfspace(&u, &params, &cfg).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn extremal_gaps_shrink() {
    let rows = extremal_sweep(2.0, 1.5, 1, &[4, 16, 64], &EngineConfig::default()).unwrap();
    for w in rows.windows(2) {
        assert!(w[0].gap > 0.0 && w[1].gap > 0.0);
        assert!(w[1].gap <= w[0].gap + w[0].ratio_error + w[1].ratio_error, "{rows:?}");
    }
    assert!(extremal_sweep(2.0, 1.5, 1, &[], &EngineConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // Both sides scale like L^{1-α} under x ↦ u(x/L), and like λ^p under u ↦ λu.
    #[test]
    fn scaling_laws(l in 0.2f64..5.0, lambda in 0.3f64..3.0, p in 1.3f64..3.5, alpha in 0.2f64..1.8) {
        let cfg = EngineConfig::default();
        let params = HardyParams::new(1, p, alpha).unwrap();
        let u = TestFunction::hat(0.4, 0.7, 1.6).unwrap();
        let base = form_ep(&u, &params, &cfg).unwrap();
        let dil = form_ep(&u.dilated(l).unwrap(), &params, &cfg).unwrap();
        let expect = base.value * l.powf(1.0 - alpha);
        prop_assert!((dil.value - expect).abs() <= 1e-6 * expect, "{} vs {expect}", dil.value);
        let sc = form_ep(&u.scaled(lambda), &params, &cfg).unwrap();
        let expect = base.value * lambda.powf(p);
        prop_assert!((sc.value - expect).abs() <= 1e-6 * expect);
        let n = weighted_norm(&u, p, alpha, &cfg).unwrap();
        let nd = weighted_norm(&u.dilated(l).unwrap(), p, alpha, &cfg).unwrap();
        prop_assert!((nd.value - n.value * l.powf(1.0 - alpha)).abs() <= 1e-9 * nd.value);
    }

    #[test]
    fn sign_flip_is_invisible(p in 1.3f64..3.5, alpha in 0.2f64..1.8) {
        let cfg = EngineConfig::default();
        let params = HardyParams::new(1, p, alpha).unwrap();
        let u = TestFunction::bump(0.3, 1.1).unwrap();
        let a = form_ep(&u, &params, &cfg).unwrap();
        let b = form_ep(&u.scaled(-1.0), &params, &cfg).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-12 * a.value);
    }
}
