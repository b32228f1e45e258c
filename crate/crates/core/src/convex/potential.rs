use serde::{Deserialize, Serialize};

use super::body::ConvexBody;
use crate::error::{HardyError, Result};
use crate::quadrature::{
    integrate_1d, pv_integral, sphere_quad_with_breaks, EngineConfig, Endpoints, Estimate,
    PvDomain, SingularIntegrand,
};
use crate::specfun::symmetric_power_difference;

/// Parameters of the Hardy potential `V_ε` for the weight `w(y) = y_d^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub beta: f64,
    pub p: f64,
    pub alpha: f64,
    /// Kernel truncation radius; `0` gives the untruncated potential.
    pub epsilon: f64,
}

impl PotentialSpec {
    fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(HardyError::invalid(format!("p must exceed 1, got {}", self.p)));
        }
        if !(self.alpha > 0.0 && self.alpha < 2.0) {
            return Err(HardyError::invalid(format!("alpha must lie in (0, 2), got {}", self.alpha)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(HardyError::invalid("epsilon must be finite and nonnegative"));
        }
        if !self.beta.is_finite() {
            return Err(HardyError::invalid("beta must be finite"));
        }
        Ok(())
    }

    /// `(1/p)(1 - r^{p-1}) + ((p-1)/p)(1 - r)` with `r = w(y)/w(x)`.
    fn g(&self, xd: f64, yd: f64) -> f64 {
        let r = (yd / xd).powf(self.beta);
        let p = self.p;
        (1.0 - r.powf(p - 1.0)) / p + (p - 1.0) / p * (1.0 - r)
    }

    /// `(G(x+h) + G(x-h))` for a displacement with normal component `s·x_d`.
    fn g_paired(&self, s: f64) -> f64 {
        let p = self.p;
        -symmetric_power_difference((p - 1.0) * self.beta, s) / p
            - (p - 1.0) / p * symmetric_power_difference(self.beta, s)
    }
}

struct Potential1d {
    spec: PotentialSpec,
    x: f64,
}

impl SingularIntegrand for Potential1d {
    fn eval(&self, y: f64) -> f64 {
        self.spec.g(self.x, y) * (y - self.x).abs().powf(-1.0 - self.spec.alpha)
    }

    fn paired(&self, x0: f64, h: f64) -> f64 {
        self.spec.g_paired(h / x0) * h.powf(-1.0 - self.spec.alpha)
    }

    fn stable_pairing(&self) -> bool {
        true
    }
}

/// `V_ε(x) = ∫_Ω G(x, y) k_ε(x, y) dy` for the weight `w(y) = y_d^β`, with
/// `G = (1/p)(w(x)^{p-1} - w(y)^{p-1})/w(x)^{p-1} + ((p-1)/p)(w(x) - w(y))/w(x)`.
///
/// `Ω` must lie in `{y_d > 0}`. In one dimension `ε = 0` is a principal
/// value. Otherwise the kernel is written in polar coordinates around `x`
/// and directions are paired with their antipodes up to the two-sided
/// directional distance, which removes the singularity, so `ε = 0` is
/// integrated directly in `d ≥ 2` as well.
pub fn potential_v(x: &[f64], body: &ConvexBody, spec: &PotentialSpec, config: &EngineConfig) -> Result<Estimate> {
    spec.validate()?;
    let d = body.dim();
    if d == 3 {
        return Err(HardyError::invalid("the Hardy potential is implemented for d ∈ {1, 2}"));
    }
    let (lo, _) = body.bounding_box();
    if !(lo[d - 1] >= 0.0) {
        return Err(HardyError::domain("the weight y_d^β needs the body inside y_d > 0"));
    }
    let h_dist = body.dist_boundary(x)?;
    let alpha = spec.alpha;
    let scale = h_dist.powf(-alpha);
    let tol = config.tol * (1.0 + scale);
    if d == 1 {
        let ConvexBody::Interval { a, b } = *body else { unreachable!() };
        if spec.epsilon == 0.0 {
            let x = x[0];
            return pv_integral(&Potential1d { spec: *spec, x }, PvDomain::Interval(a, b), x, tol);
        }
    }

    let xd = x[d - 1];
    let eps = spec.epsilon;
    let inner_tol = tol * 1e-2;
    let failure = std::cell::Cell::new(None::<HardyError>);
    let along = |omega: &[f64]| -> f64 {
        let fwd = body.ray(x, omega);
        let back: Vec<f64> = omega.iter().map(|w| -w).collect();
        let m = fwd.min(body.ray(x, &back));
        let od = omega[d - 1];
        let mut total = 0.0;
        // symmetric part: half of the paired integrand, counted once per ω
        if eps < m {
            let paired = |r: f64| 0.5 * spec.g_paired(r * od / xd) * r.powf(-1.0 - alpha);
            let ends = if eps == 0.0 { Endpoints::BOTH } else { Endpoints::HI };
            match integrate_1d(paired, eps, m, ends, inner_tol) {
                Ok(e) => total += e.value,
                Err(e) => failure.set(Some(e)),
            }
        }
        let start = eps.max(m);
        if start < fwd {
            let tail = |r: f64| {
                let yd = xd + r * od;
                spec.g(xd, yd) * r.powf(-1.0 - alpha)
            };
            match integrate_1d(tail, start, fwd, Endpoints::HI, inner_tol) {
                Ok(e) => total += e.value,
                Err(e) => failure.set(Some(e)),
            }
        }
        total
    };
    let breaks = direction_breaks(x, body);
    let est = sphere_quad_with_breaks(along, d, &breaks, tol)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(est)
}

/// Polar angles (`d = 2`) at which the ray distances from `x` have kinks:
/// towards the vertices and away from them.
pub(crate) fn direction_breaks(x: &[f64], body: &ConvexBody) -> Vec<f64> {
    let d = x.len();
    let mut out = Vec::new();
    for v in body.vertices() {
        let diff: Vec<f64> = v.iter().zip(x).map(|(a, b)| a - b).collect();
        let n = diff.iter().map(|t| t * t).sum::<f64>().sqrt();
        if n == 0.0 {
            continue;
        }
        match d {
            2 => {
                let t = diff[1].atan2(diff[0]).rem_euclid(std::f64::consts::TAU);
                out.push(t);
                out.push((t + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
            }
            _ => {}
        }
    }
    if d == 2 {
        out.extend(balance_angles(x, body, &out));
    }
    out
}

/// Angles where the ray distances towards `θ` and `θ + π` coincide, i.e.
/// where the two-sided directional distance switches branches.
fn balance_angles(x: &[f64], body: &ConvexBody, vertex_breaks: &[f64]) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let f = |t: f64| {
        let w = [t.cos(), t.sin()];
        body.ray(x, &w) - body.ray(x, &[-w[0], -w[1]])
    };
    if let ConvexBody::Ball { center, .. } = body {
        let v = [x[0] - center[0], x[1] - center[1]];
        if v[0].hypot(v[1]) == 0.0 {
            return Vec::new();
        }
        let t = v[1].atan2(v[0]);
        return [0.5, 1.5].iter().map(|k| (t + k * PI).rem_euclid(TAU)).collect();
    }
    // f(θ + π) = -f(θ), so scanning [0, π] finds every crossing once
    let mut cuts: Vec<f64> = vertex_breaks.iter().map(|t| t.rem_euclid(PI)).collect();
    cuts.extend([0.0, PI]);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        const SCAN: usize = 8;
        let mut a = w[0];
        let mut fa = f(a);
        for i in 1..=SCAN {
            let b = w[0] + (w[1] - w[0]) * i as f64 / SCAN as f64;
            let fb = f(b);
            if fa == 0.0 {
                out.push(a);
            } else if fa * fb < 0.0 {
                let (mut lo, mut hi, mut flo) = (a, b, fa);
                while hi - lo > 4.0 * f64::EPSILON * hi.max(1.0) {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid);
                    if fm * flo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            a = b;
            fa = fb;
        }
    }
    let mut full: Vec<f64> = out.iter().flat_map(|t| [*t, (t + PI).rem_euclid(TAU)]).collect();
    full.sort_by(f64::total_cmp);
    full.dedup();
    full
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weight_has_zero_potential() {
        let cfg = EngineConfig::default();
        let spec = PotentialSpec { beta: 0.0, p: 2.0, alpha: 1.5, epsilon: 0.0 };
        let i = ConvexBody::interval(0.0, 1.0).unwrap();
        assert!(potential_v(&[0.3], &i, &spec, &cfg).unwrap().value.abs() < 1e-14);
        let sq = ConvexBody::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(potential_v(&[0.3, 0.6], &sq, &spec, &cfg).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn truncation_converges() {
        let cfg = EngineConfig::default();
        let i = ConvexBody::interval(0.0, 1.0).unwrap();
        let mut spec = PotentialSpec { beta: 0.25, p: 2.0, alpha: 1.5, epsilon: 0.0 };
        let v0 = potential_v(&[0.3], &i, &spec, &cfg).unwrap().value;
        spec.epsilon = 1e-5;
        let ve = potential_v(&[0.3], &i, &spec, &cfg).unwrap().value;
        // the paired integrand is O(r^{1-α}) near 0, so the gap is O(ε^{2-α})
        assert!((v0 - ve).abs() < 1e-2 * v0.abs(), "{v0} {ve}");
    }
}
