use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::adaptive::{integrate_1d, Endpoints};
use super::gauss::gauss_legendre;
use super::Estimate;
use crate::error::{HardyError, Result};

pub fn unit_vector_2d(theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c, s]
}

/// `∫_{S^{d-1}} g(ω) dω` for `d ∈ {1, 2, 3}`.
pub fn sphere_quad(g: impl Fn(&[f64]) -> f64, d: usize, tol: f64) -> Result<Estimate> {
    sphere_quad_with_breaks(g, d, &[], tol)
}

/// Like [`sphere_quad`], with extra panel boundaries where `g` has kinks:
/// polar angles in `[0, 2π)` for `d = 2`, values of `ω_3 ∈ (-1, 1)` for
/// `d = 3`.
///
/// The circle is always cut at the four axis directions and the polar
/// variable at `ω_3 = 0`, so integrands such as `|ω_d|^α` only have endpoint
/// singularities, which the tanh-sinh panels absorb.
pub fn sphere_quad_with_breaks(
    g: impl Fn(&[f64]) -> f64,
    d: usize,
    breaks: &[f64],
    tol: f64,
) -> Result<Estimate> {
    match d {
        1 => Ok(Estimate::deterministic(g(&[1.0]) + g(&[-1.0]), 0.0, 2)),
        2 => circle(&g, breaks, tol),
        3 => {
            let mut cuts = vec![-1.0, 0.0, 1.0];
            cuts.extend(breaks.iter().copied().filter(|m| m.abs() < 1.0));
            let cuts = sorted_unique(cuts);
            let inner_tol = tol / (8.0 * PI);
            let mut inner_err: f64 = 0.0;
            let mut inner_nodes = 0u64;
            let mut total = Estimate::zero();
            let pieces = (cuts.len() - 1) as f64;
            for w in cuts.windows(2) {
                let cell = std::cell::Cell::new((0.0f64, 0u64));
                let outer = integrate_1d(
                    |mu| {
                        let rho = (1.0 - mu * mu).max(0.0).sqrt();
                        let ring = circle(
                            &|v: &[f64]| g(&[rho * v[0], rho * v[1], mu]),
                            &[],
                            inner_tol,
                        );
                        match ring {
                            Ok(e) => {
                                let (err, n) = cell.get();
                                cell.set((err.max(e.error), n + e.samples_or_nodes));
                                e.value
                            }
                            Err(_) => f64::NAN,
                        }
                    },
                    w[0],
                    w[1],
                    Endpoints::BOTH,
                    tol / (2.0 * pieces),
                )?;
                if !outer.value.is_finite() {
                    return Err(HardyError::QuadratureFailure {
                        reason: "inner circle rule failed on the 2-sphere".into(),
                        partial: outer,
                    });
                }
                let (err, n) = cell.get();
                inner_err = inner_err.max(err);
                inner_nodes += n;
                total = total.combine(&outer);
            }
            // Inner errors are at most `inner_err` at every node; integrating
            // over μ multiplies by the length 2.
            Ok(Estimate::deterministic(
                total.value,
                total.error + 2.0 * inner_err,
                inner_nodes,
            ))
        }
        _ => Err(HardyError::invalid(format!(
            "sphere quadrature supports d ∈ {{1, 2, 3}}, got {d}"
        ))),
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    v
}

fn circle(g: &impl Fn(&[f64]) -> f64, breaks: &[f64], tol: f64) -> Result<Estimate> {
    let mut cuts: Vec<f64> = (0..=4).map(|k| k as f64 * FRAC_PI_2).collect();
    cuts.extend(
        breaks
            .iter()
            .map(|t| t.rem_euclid(TAU))
            .filter(|t| *t > 0.0 && *t < TAU),
    );
    let cuts = sorted_unique(cuts);
    let share = tol / (cuts.len() - 1) as f64;
    let mut total = Estimate::zero();
    for w in cuts.windows(2) {
        let arc = integrate_1d(
            |t| g(&unit_vector_2d(t)),
            w[0],
            w[1],
            Endpoints::BOTH,
            share,
        )?;
        total = total.combine(&arc);
    }
    Ok(total)
}

/// Plain product rule: periodic trapezoid with `n` points on the circle;
/// for `d = 3`, `n`-point Gauss–Legendre in `ω_3` times a `2n`-point
/// trapezoid in azimuth. Spectrally accurate for smooth `g` only.
pub fn sphere_trapezoid(g: impl Fn(&[f64]) -> f64, d: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(HardyError::invalid("sphere rule needs at least one node"));
    }
    let ring = |g: &dyn Fn(&[f64]) -> f64, m: usize| -> f64 {
        let h = TAU / m as f64;
        (0..m).map(|k| g(&unit_vector_2d(k as f64 * h))).sum::<f64>() * h
    };
    match d {
        1 => Ok(g(&[1.0]) + g(&[-1.0])),
        2 => Ok(ring(&g, n)),
        3 => {
            let rule = gauss_legendre(n);
            Ok(rule
                .mapped(-1.0, 1.0)
                .map(|(mu, w)| {
                    let rho = (1.0 - mu * mu).sqrt();
                    w * ring(&|v: &[f64]| g(&[rho * v[0], rho * v[1], mu]), 2 * n)
                })
                .sum())
        }
        _ => Err(HardyError::invalid(format!(
            "sphere quadrature supports d ∈ {{1, 2, 3}}, got {d}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn areas() {
        assert_eq!(sphere_quad(|_| 1.0, 1, 1e-12).unwrap().value, 2.0);
        let c = sphere_quad(|_| 1.0, 2, 1e-12).unwrap();
        assert!((c.value - TAU).abs() < 1e-12);
        let s = sphere_quad(|_| 1.0, 3, 1e-10).unwrap();
        assert!((s.value - 4.0 * PI).abs() < 1e-10, "{s:?}");
        assert!((sphere_trapezoid(|_| 1.0, 3, 16).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!(sphere_quad(|_| 1.0, 4, 1e-8).is_err());
    }

    #[test]
    fn second_moment() {
        // ∫_{S^2} ω_1^2 = 4π/3
        let s = sphere_quad(|w| w[0] * w[0], 3, 1e-10).unwrap();
        assert!((s.value - 4.0 * PI / 3.0).abs() < 1e-10);
    }
}
