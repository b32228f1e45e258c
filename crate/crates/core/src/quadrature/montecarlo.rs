//! Stratified Monte Carlo for `(1/2) ∬_{Ω×Ω} Φ(x, y) |x-y|^{-d-α}` in d ≥ 2.
//!
//! `x` is uniform in a box `B` containing the support of `u`, `y = x + rθ`
//! with `θ` uniform on the sphere. For `r ≤ R₀ = diam B` the radius is drawn
//! with density `∝ r^{1-α}`, which leaves the bounded weight
//! `Φ R₀^{2-α} / ((2-α) r²)`; pairs with `y ∈ B` are counted with weight 1/2
//! (both orders are sampled), pairs with `y ∈ Ω \ B` with weight 1. Beyond
//! `R₀` only `|u(x)|^p` survives and the radial integral along the ray is
//! exact: `|u(x)|^p [R₀^{-α} - ρ^{-α}]₊ / α`, `ρ` the exit distance.
//!
//! The radial CDF is split into equal-probability strata, each with its own
//! random stream; the standard error comes from the stratum variances.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::rng;
use super::Estimate;
use crate::error::{HardyError, Result};
use crate::parallel::{par_map, Parallelism};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub samples: u64,
    pub strata: u32,
    pub seed: u64,
    pub parallelism: Parallelism,
}

/// A pair integrand on a domain `Ω ⊂ R^d`, `d ∈ {2, 3}`.
pub trait McPairIntegrand: Sync {
    fn dim(&self) -> usize;
    /// Box `[lo, hi]` containing the support of `u`.
    fn sample_box(&self) -> (Vec<f64>, Vec<f64>);
    /// `Φ(x, y)`; must equal `|u(x)|^p` when `u(y) = 0`.
    fn phi(&self, x: &[f64], y: &[f64]) -> f64;
    /// `|u(x)|^p`.
    fn u_pow(&self, x: &[f64]) -> f64;
    fn in_domain(&self, y: &[f64]) -> bool;
    /// Distance from `x` along `dir` to the complement of `Ω` (`∞` if the
    /// ray never leaves). Only used for rays that leave `B`, on which the
    /// domain is assumed to be a single segment (convex `Ω`).
    fn exit_distance(&self, x: &[f64], dir: &[f64]) -> f64;
}

fn random_direction(d: usize, rng: &mut ChaCha8Rng, out: &mut [f64]) {
    match d {
        2 => {
            let t = TAU * rng.random::<f64>();
            out[0] = t.cos();
            out[1] = t.sin();
        }
        _ => {
            let mu = 2.0 * rng.random::<f64>() - 1.0;
            let t = TAU * rng.random::<f64>();
            let rho = (1.0 - mu * mu).max(0.0).sqrt();
            out[0] = rho * t.cos();
            out[1] = rho * t.sin();
            out[2] = mu;
        }
    }
}

fn sphere_area(d: usize) -> f64 {
    if d == 2 {
        TAU
    } else {
        4.0 * PI
    }
}

/// Running mean/variance (Welford).
#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn variance_of_mean(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.m2 / ((self.n - 1) as f64 * self.n as f64)
    }
}

/// Equal-weight stratification of the unit interval: `f(u, rng)` is called
/// with `u` uniform in the current stratum. Returns the estimate of
/// `E[f(U)]` for `U` uniform on `(0, 1)` and its standard error.
pub(crate) fn stratified_mean(
    settings: &McSettings,
    f: impl Fn(f64, &mut ChaCha8Rng) -> f64 + Sync,
) -> Result<Estimate> {
    let strata = settings.strata.max(1) as u64;
    if settings.samples < 2 * strata {
        return Err(HardyError::invalid(format!(
            "need at least two samples per stratum ({} samples, {} strata)",
            settings.samples, strata
        )));
    }
    let ids: Vec<u64> = (0..strata).collect();
    let per = settings.samples / strata;
    let extra = settings.samples % strata;
    let moments = par_map(settings.parallelism, &ids, |&k| {
        let mut rng = rng::stream(settings.seed, k);
        let n = per + u64::from(k < extra);
        let mut m = Moments::default();
        for _ in 0..n {
            let u = (k as f64 + rng.random::<f64>()) / strata as f64;
            m.push(f(u, &mut rng));
        }
        m
    });
    let w = 1.0 / strata as f64;
    let value = moments.iter().map(|m| w * m.mean).sum::<f64>();
    let var = moments.iter().map(|m| w * w * m.variance_of_mean()).sum::<f64>();
    if !value.is_finite() {
        return Err(HardyError::QuadratureFailure {
            reason: "non-finite Monte Carlo sample".into(),
            partial: Estimate::monte_carlo(value, f64::INFINITY, settings.samples),
        });
    }
    Ok(Estimate::monte_carlo(value, var.sqrt(), settings.samples))
}

/// `(1/2) ∬_{Ω×Ω} Φ(x, y) |x-y|^{-d-α} dx dy`.
pub fn double_singular_mc(
    integrand: &impl McPairIntegrand,
    alpha: f64,
    settings: &McSettings,
) -> Result<Estimate> {
    let d = integrand.dim();
    if !(d == 2 || d == 3) {
        return Err(HardyError::invalid(format!("Monte Carlo engine supports d ∈ {{2, 3}}, got {d}")));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(HardyError::invalid(format!("α must lie in (0, 2), got {alpha}")));
    }
    let (lo, hi) = integrand.sample_box();
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    if !(volume > 0.0) {
        return Err(HardyError::invalid("sample box must have positive volume"));
    }
    let r0 = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let in_box = |y: &[f64]| y.iter().zip(lo.iter().zip(&hi)).all(|(v, (a, b))| *v >= *a && *v <= *b);
    let near_scale = r0.powf(2.0 - alpha) / (2.0 - alpha);
    let far_base = r0.powf(-alpha);
    let scale = volume * sphere_area(d);

    let est = stratified_mean(settings, |u, rng| {
        let mut x = [0.0; 3];
        let mut y = [0.0; 3];
        let mut dir = [0.0; 3];
        for i in 0..d {
            x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
        }
        random_direction(d, rng, &mut dir);
        let (x, y, dir) = (&x[..d], &mut y[..d], &dir[..d]);
        if !integrand.in_domain(x) {
            return 0.0;
        }
        // Inverse CDF of r ∝ r^{1-α} on (0, R₀].
        let r = r0 * u.powf(1.0 / (2.0 - alpha));
        for i in 0..d {
            y[i] = x[i] + r * dir[i];
        }
        let near = if !integrand.in_domain(y) {
            0.0
        } else {
            let c = if in_box(y) { 0.5 } else { 1.0 };
            c * integrand.phi(x, y) * near_scale / (r * r)
        };
        let up = integrand.u_pow(x);
        let far = if up > 0.0 {
            let rho = integrand.exit_distance(x, dir);
            up * (far_base - rho.powf(-alpha)).max(0.0) / alpha
        } else {
            0.0
        };
        scale * (near + far)
    })?;
    Ok(est)
}
