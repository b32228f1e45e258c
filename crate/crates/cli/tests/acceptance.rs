//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed;
//! exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::Rng;

use hardy_core::battery::{convex_battery, halfspace_battery, interval_battery};
use hardy_core::bregman::{bregman_f, comparability_ratio, comparability_scan, signed_pow, ComparabilityGrid};
use hardy_core::convex::{convex_form, convex_weighted_norm, m_alpha, verify_interval, ConvexBody};
use hardy_core::halfspace::{
    decomposition_residual, extremal_sweep, ground_state_residual, verify_halfspace, HardyReport, TestFunction,
};
use hardy_core::quadrature::{rng::stream, sphere_quad};
use hardy_core::specfun::{angular_factor, gamma_ab_closed, gamma_ab_quad, kappa, kappa_bd};
use hardy_core::{EngineConfig, HardyParams};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn alpha_grid() -> impl Iterator<Item = f64> {
    (1..=19).filter(|&i| i != 10).map(|i| i as f64 / 10.0)
}

const PS: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 5.0];
const PAIRS: [(f64, f64); 6] = [(1.5, 0.5), (1.5, 1.5), (2.0, 0.5), (2.0, 1.5), (3.0, 0.5), (3.0, 1.5)];

fn constants_cross_check() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for alpha in alpha_grid() {
            let (k, kb) = (kappa(d, 2.0, alpha).unwrap(), kappa_bd(d, alpha).unwrap());
            worst = worst.max((k - kb).abs() / (1.0 + kb.abs()));
        }
    }
    check(worst <= 1e-12, format!("max scaled difference {worst:.2e}"))
}

fn conjugate_symmetry() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for alpha in alpha_grid() {
            for p in PS {
                let q = p / (p - 1.0);
                let (a, b) = (kappa(d, p, alpha).unwrap(), kappa(d, q, alpha).unwrap());
                worst = worst.max((a - b).abs() / (1.0 + a.abs()));
            }
        }
    }
    check(worst <= 1e-12, format!("max scaled difference {worst:.2e}"))
}

fn kappa_limit_at_one() -> Outcome {
    let hs = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for p in PS {
            for sign in [1.0, -1.0] {
                let v: Vec<f64> = hs.iter().map(|h| kappa(d, p, 1.0 + sign * h).unwrap().abs()).collect();
                if v.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(format!("not shrinking: d={d} p={p} side {sign}: {v:?}"));
                }
                worst = worst.max(v[3]);
            }
        }
    }
    check(worst <= 1e-2, format!("max |κ(1±1e-4)| = {worst:.2e}"))
}

fn gamma_agreement() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..20 {
        // 20 values in (0, 2) avoiding α = 1
        let alpha = 0.05 + 0.1 * i as f64 + if i >= 10 { 0.001 } else { 0.0 };
        for j in 0..20 {
            let beta = -1.0 + (alpha + 1.0) * (j as f64 + 0.5) / 20.0;
            let q = gamma_ab_quad(alpha, beta, 1e-12).map_err(|e| format!("α={alpha} β={beta}: {e}"))?;
            let c = gamma_ab_closed(alpha, beta).unwrap();
            worst = worst.max((q.value - c).abs());
            count += 1;
        }
    }
    check(worst <= 1e-8, format!("{count} points, max |quad - closed| {worst:.2e}"))
}

fn ground_state() -> Outcome {
    let cfg = EngineConfig::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for alpha in [0.3, 0.7, 1.2, 1.5, 1.8] {
        for beta in [-0.6, (alpha - 1.0) / 1.5, (alpha - 1.0) / 2.0, (alpha - 1.0) / 3.0, 0.8 * alpha] {
            for x in [0.2, 1.0, 5.0] {
                let r = ground_state_residual(beta, alpha, x, &cfg).map_err(|e| format!("α={alpha} β={beta} x={x}: {e}"))?;
                worst = worst.max(r);
                count += 1;
            }
        }
    }
    check(worst <= 1e-6, format!("{count} points, max residual {worst:.2e}"))
}

fn decomposition() -> Outcome {
    let cfg = EngineConfig::default();
    let mut rng = stream(2024, 6);
    let bumps: Vec<TestFunction> = (0..10)
        .map(|_| {
            let a = rng.random_range(0.05..1.0);
            TestFunction::bump(a, a + rng.random_range(0.2..2.0)).unwrap()
        })
        .collect();
    let mut worst = 0.0f64;
    for (p, alpha) in PAIRS {
        let params = HardyParams::new(1, p, alpha).unwrap();
        for u in &bumps {
            let c = decomposition_residual(u, &params, params.beta(), &cfg).map_err(|e| format!("p={p} α={alpha}: {e}"))?;
            if c.remainder.value < -c.remainder.error {
                return Err(format!("negative remainder p={p} α={alpha}: {:?}", c.remainder));
            }
            worst = worst.max(c.relative_gap);
        }
    }
    check(worst <= 1e-4, format!("60 runs, max relative gap {worst:.2e}"))
}

fn halfspace_batteries() -> Outcome {
    let cfg = EngineConfig::default();
    let mut failures = 0;
    let mut min_ratio = f64::INFINITY;
    for (k, (p, alpha)) in PAIRS.into_iter().enumerate() {
        let params = HardyParams::new(1, p, alpha).unwrap();
        for u in halfspace_battery(50, 100 + k as u64).unwrap() {
            let r = verify_halfspace(&u, &params, &cfg).map_err(|e| format!("{}: {e}", u.name()))?;
            failures += usize::from(!r.passed());
            min_ratio = min_ratio.min(r.ratio / r.constant);
        }
    }
    check(failures == 0, format!("300 functions, {failures} failures, min ratio/κ {min_ratio:.4}"))
}

fn sharpness_trend() -> Outcome {
    let cfg = EngineConfig::default();
    let ns = [4, 16, 64, 256, 1024];
    let mut bands = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for alpha in [0.75, 1.5] {
            let rows = extremal_sweep(p, alpha, 1, &ns, &cfg).map_err(|e| format!("p={p} α={alpha}: {e}"))?;
            if rows.iter().any(|r| !(r.gap > 0.0)) {
                return Err(format!("nonpositive gap p={p} α={alpha}"));
            }
            if rows.windows(2).any(|w| w[1].gap > w[0].gap + w[0].ratio_error + w[1].ratio_error) {
                return Err(format!("gap increases p={p} α={alpha}"));
            }
            let gl: Vec<f64> = rows.iter().map(|r| r.gap_log_n).collect();
            let band = gl.iter().copied().fold(0.0, f64::max) / gl.iter().copied().fold(f64::INFINITY, f64::min);
            if band > 3.0 {
                return Err(format!("gap·log n band {band:.3} p={p} α={alpha}: {gl:?}"));
            }
            bands.push(band);
        }
    }
    let widest = bands.iter().copied().fold(0.0, f64::max);
    Ok(format!("6 sweeps, widest gap·log n band {widest:.3}"))
}

fn interval_batteries() -> Outcome {
    let cfg = EngineConfig::default();
    let mut failures = 0;
    let mut runs = 0;
    for (s, j) in [vec![(0.0, 1.0)], vec![(0.0, 1.0), (2.0, 3.0)]].iter().enumerate() {
        let funcs = interval_battery(20, j, 300 + s as u64).unwrap();
        for alpha in [1.1, 1.5, 1.9] {
            for p in [1.5, 2.0, 3.0] {
                for u in &funcs {
                    let r = verify_interval(u, j, p, alpha, &cfg).map_err(|e| format!("{}: {e}", u.name()))?;
                    failures += usize::from(!r.passed());
                    runs += 1;
                }
            }
        }
    }
    check(failures == 0, format!("{runs} runs, {failures} failures"))
}

fn sphere_identity() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        for alpha in [0.25, 0.5, 1.0, 1.5] {
            let e = sphere_quad(|w| w[d - 1].abs().powf(alpha), d, 1e-11).map_err(|e| e.to_string())?;
            let expect = 2.0 * angular_factor(d, alpha).unwrap();
            worst = worst.max((e.value - expect).abs() / expect);
        }
    }
    check(worst <= 1e-8, format!("max relative difference {worst:.2e}"))
}

fn m_alpha_below_distance() -> Outcome {
    let cfg = EngineConfig::default();
    let bodies = [
        ("interval", ConvexBody::interval(0.0, 1.0).unwrap()),
        ("square", ConvexBody::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()),
        ("disk", ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap()),
        ("triangle", ConvexBody::polygon(&[[0.0, 0.0], [2.0, 0.0], [0.5, 1.5]]).unwrap()),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (k, (name, body)) in bodies.iter().enumerate() {
        let mut rng = stream(11, k as u64);
        let (lo, hi) = body.bounding_box();
        let mut points = 0;
        while points < 1000 {
            let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.random_range(*a..*b)).collect();
            if !body.contains(&x) || body.dist_boundary(&x).unwrap() <= 0.0 {
                continue;
            }
            points += 1;
            let dist = body.dist_boundary(&x).unwrap();
            for alpha in [1.1, 1.5, 1.9] {
                let m = m_alpha(&x, body, alpha, &cfg).map_err(|e| format!("{name} {x:?}: {e}"))?;
                // quadrature error of m^{-α} is below 1e-10 relative
                if m > dist * (1.0 + 1e-10) {
                    return Err(format!("{name} {x:?} α={alpha}: m = {m} > dist = {dist}"));
                }
                worst = worst.max(m / dist);
            }
        }
    }
    let i = ConvexBody::interval(0.0, 1.0).unwrap();
    let centre = m_alpha(&[0.5], &i, 1.5, &cfg).unwrap();
    check((centre - 0.5).abs() <= 1e-12, format!("12000 evaluations, max m/dist {worst:.12}, centre m = {centre}"))
}

fn convex_monte_carlo() -> Outcome {
    let bodies = [
        ("disk", ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap()),
        ("square", ConvexBody::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()),
    ];
    let mut runs = 0;
    let mut worst = f64::INFINITY;
    for (name, body) in &bodies {
        for u in convex_battery(body).unwrap() {
            for p in [1.5, 2.0] {
                for alpha in [1.25, 1.75] {
                    runs += 1;
                    let cfg = EngineConfig::default().with_samples(1_000_000).with_seed(runs);
                    let tag = format!("{name}/{} p={p} α={alpha}", u.name());
                    let lhs = convex_form(&u, body, p, alpha, &cfg).map_err(|e| format!("{tag}: {e}"))?;
                    let rm = convex_weighted_norm(&u, body, p, alpha, true, &cfg).map_err(|e| format!("{tag}: {e}"))?;
                    let rd = convex_weighted_norm(&u, body, p, alpha, false, &cfg).map_err(|e| format!("{tag}: {e}"))?;
                    let k = kappa(2, p, alpha).unwrap();
                    for rhs in [&rm, &rd] {
                        let r = HardyReport::new(u.name(), lhs, *rhs, k).unwrap();
                        if !r.passed() {
                            return Err(format!("{tag}: {r:?}"));
                        }
                        worst = worst.min(r.margin / r.tolerance);
                    }
                    if rm.value + rm.error + rd.error < rd.value {
                        return Err(format!("{tag}: m_α weight {rm:?} below dist weight {rd:?}"));
                    }
                }
            }
        }
    }
    Ok(format!("{runs} runs at 1e6 samples, min margin/tolerance {worst:.1}"))
}

fn bregman_properties() -> Outcome {
    let scans: Vec<_> = PS
        .iter()
        .map(|&p| comparability_scan(p, &ComparabilityGrid::default()).unwrap())
        .collect();
    let mut rng = stream(13, 0);
    let mut violations = 0;
    let mut worst_p2 = 0.0f64;
    for _ in 0..100_000 {
        let k = rng.random_range(0..PS.len());
        let p = PS[k];
        let a: f64 = rng.random_range(-10.0..10.0);
        let b: f64 = rng.random_range(-10.0..10.0);
        if a == b {
            continue;
        }
        let sym = bregman_f(p, a, b) + bregman_f(p, b, a);
        let exact = p * (b - a) * (signed_pow(b, p - 1.0).unwrap() - signed_pow(a, p - 1.0).unwrap());
        violations += usize::from((sym - exact).abs() > 1e-11 * exact.abs());
        violations += usize::from(!scans[k].contains(a, b, 1e-12));
        worst_p2 = worst_p2.max((comparability_ratio(2.0, a, b) - 1.0).abs());
    }
    check(
        violations == 0 && worst_p2 <= 1e-12,
        format!("1e5 triples, {violations} violations, max |ratio_2 - 1| {worst_p2:.1e}"),
    )
}

fn reproducible_cli() -> Outcome {
    let runs: [&[&str]; 2] = [
        &["verify", "convex", "--p", "2", "--alpha", "1.5", "--body", "ball@0,0,1", "--samples", "100000", "--seed", "42", "--json"],
        &["sweep", "extremal", "--p", "2", "--alpha", "1.5", "--n", "4,16", "--seed", "42", "--json"],
    ];
    for args in runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_hardy"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (go()?, go()?);
        if a.status.code() != Some(0) || a.stdout.is_empty() {
            return Err(format!("{args:?} exited with {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{args:?}: outputs differ"));
        }
    }
    Ok("2 commands, byte-identical JSON".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("constants cross-check", constants_cross_check),
        ("conjugate symmetry", conjugate_symmetry),
        ("kappa limit at alpha = 1", kappa_limit_at_one),
        ("gamma quadrature vs closed form", gamma_agreement),
        ("ground-state identity", ground_state),
        ("decomposition identity", decomposition),
        ("half-space batteries", halfspace_batteries),
        ("sharpness trend", sharpness_trend),
        ("interval batteries", interval_batteries),
        ("sphere identity", sphere_identity),
        ("m_alpha below distance", m_alpha_below_distance),
        ("convex Monte Carlo", convex_monte_carlo),
        ("Bregman properties", bregman_properties),
        ("CLI reproducibility", reproducible_cli),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} {tag} {secs:>8.2}s  {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
