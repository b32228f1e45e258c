//! Signed powers `a^{⟨k⟩} = |a|^k sgn a`, the Bregman divergence
//! `F_p(a, b) = |b|^p - |a|^p - p a^{⟨p-1⟩}(b - a)` and its two-sided
//! comparability with `(b^{⟨p/2⟩} - a^{⟨p/2⟩})²`.

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::parallel::{par_map, Parallelism};

/// Below this relative distance `|b-a| / |a|` both `F_p` and the ratio are
/// evaluated from the binomial series in `r = (b-a)/a`.
const SERIES_RADIUS: f64 = 0.1;

/// `|a|^k sgn a`. Defined for `k > 0`, and for `k ≤ 0` away from `a = 0`.
pub fn signed_pow(a: f64, k: f64) -> Result<f64> {
    if a == 0.0 {
        if k > 0.0 {
            return Ok(0.0);
        }
        return Err(HardyError::domain(format!("0^⟨{k}⟩ is undefined")));
    }
    Ok(spow(a, k))
}

/// Infallible variant for exponents known to be positive.
#[inline]
pub(crate) fn spow(a: f64, k: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a.abs().powf(k).copysign(a)
    }
}

/// `Σ_{k≥2} C(p, k) r^k = (1+r)^p - 1 - p r` for `|r| ≤ 0.1`.
fn binomial_tail(p: f64, r: f64) -> f64 {
    let mut coeff = p * (p - 1.0) / 2.0;
    let mut rk = r * r;
    let mut sum = 0.0;
    for k in 2..60 {
        let term = coeff * rk;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        coeff *= (p - k as f64) / (k as f64 + 1.0);
        rk *= r;
    }
    sum
}

/// `F_p(a, b) ≥ 0`, the second-order Taylor remainder of `|·|^p` at `a`.
pub fn bregman_f(p: f64, a: f64, b: f64) -> f64 {
    debug_assert!(p > 1.0);
    if a != 0.0 && (b - a).abs() < SERIES_RADIUS * a.abs() {
        let r = (b - a) / a;
        return a.abs().powf(p) * binomial_tail(p, r);
    }
    let v = b.abs().powf(p) - a.abs().powf(p) - p * spow(a, p - 1.0) * (b - a);
    v.max(0.0)
}

/// `F_p(a, b) / (b^{⟨p/2⟩} - a^{⟨p/2⟩})²` for `a ≠ b`.
pub fn comparability_ratio(p: f64, a: f64, b: f64) -> f64 {
    if a != 0.0 && (b - a).abs() < SERIES_RADIUS * a.abs() {
        let r = (b - a) / a;
        // Common factor |a|^p cancels.
        let den = (0.5 * p * r.ln_1p()).exp_m1();
        return binomial_tail(p, r) / (den * den);
    }
    let den = spow(b, 0.5 * p) - spow(a, 0.5 * p);
    bregman_f(p, a, b) / (den * den)
}

/// Sample set of `(a, b)` pairs for [`comparability_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ComparabilityGrid {
    /// `n` equally spaced angles on the unit circle of the `(a, b)`-plane.
    /// Because the ratio is 0-homogeneous this covers every pair; the grid
    /// extremes are refined by golden-section search and compared with the
    /// limits at `a = b` (`2(p-1)/p`), `a = 0` and `b = 0` (both 1) and
    /// `b = -a` (`p/2`).
    UnitCircle { points: usize },
    /// `n × n` tensor grid on `[lo, hi]²`, scanned as is.
    Square { lo: f64, hi: f64, n: usize },
    /// Explicit pairs.
    Pairs { pairs: Vec<(f64, f64)> },
}

impl Default for ComparabilityGrid {
    fn default() -> Self {
        ComparabilityGrid::UnitCircle { points: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityScan {
    pub p: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    pub grid_spec: ComparabilityGrid,
    /// Pairs attaining the bounds (`None` when attained only as a limit).
    pub argmin: Option<(f64, f64)>,
    pub argmax: Option<(f64, f64)>,
}

impl ComparabilityScan {
    /// Whether `ratio(a, b)` lies in the bracket up to relative `slack`.
    pub fn contains(&self, a: f64, b: f64, slack: f64) -> bool {
        let r = comparability_ratio(self.p, a, b);
        r >= self.c_lower * (1.0 - slack) && r <= self.c_upper * (1.0 + slack)
    }
}

fn circle_point(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c, s)
}

/// Golden-section search of `sign·f` on `[lo, hi]`; returns the optimum.
fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, maximize: bool) -> (f64, f64) {
    let g = |t: f64| if maximize { -f(t) } else { f(t) };
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

pub fn comparability_scan(p: f64, grid: &ComparabilityGrid) -> Result<ComparabilityScan> {
    comparability_scan_with(p, grid, Parallelism::default())
}

pub fn comparability_scan_with(
    p: f64,
    grid: &ComparabilityGrid,
    parallelism: Parallelism,
) -> Result<ComparabilityScan> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(HardyError::invalid(format!("p must lie in (1, ∞), got {p}")));
    }
    let pairs: Vec<(f64, f64)> = match grid {
        ComparabilityGrid::UnitCircle { points } => (0..*points)
            .map(|k| circle_point(std::f64::consts::TAU * k as f64 / *points as f64))
            .collect(),
        ComparabilityGrid::Square { lo, hi, n } => {
            if !(lo < hi) || *n < 2 {
                return Err(HardyError::invalid("square grid needs lo < hi and n ≥ 2"));
            }
            let step = (hi - lo) / (*n - 1) as f64;
            (0..*n)
                .flat_map(|i| (0..*n).map(move |j| (lo + i as f64 * step, lo + j as f64 * step)))
                .collect()
        }
        ComparabilityGrid::Pairs { pairs } => pairs.clone(),
    };
    let ratios = par_map(parallelism, &pairs, |&(a, b)| {
        if a == b || !(a.is_finite() && b.is_finite()) {
            None
        } else {
            Some(comparability_ratio(p, a, b))
        }
    });
    let mut lower: Option<(f64, (f64, f64), usize)> = None;
    let mut upper: Option<(f64, (f64, f64), usize)> = None;
    for (i, (r, pair)) in ratios.iter().zip(&pairs).enumerate() {
        let Some(r) = *r else { continue };
        if lower.is_none_or(|(v, _, _)| r < v) {
            lower = Some((r, *pair, i));
        }
        if upper.is_none_or(|(v, _, _)| r > v) {
            upper = Some((r, *pair, i));
        }
    }
    let (Some(mut lower), Some(mut upper)) = (lower, upper) else {
        return Err(HardyError::invalid("comparability grid has no pair with a ≠ b"));
    };
    let mut argmin = Some(lower.1);
    let mut argmax = Some(upper.1);

    if let ComparabilityGrid::UnitCircle { points } = grid {
        let h = std::f64::consts::TAU / *points as f64;
        let ratio_at = |t: f64| {
            let (a, b) = circle_point(t);
            if (a - b).abs() < 1e-300 {
                2.0 * (p - 1.0) / p
            } else {
                comparability_ratio(p, a, b)
            }
        };
        for (slot, maximize) in [(&mut lower, false), (&mut upper, true)] {
            let t0 = slot.2 as f64 * h;
            let (t, v) = golden(ratio_at, t0 - h, t0 + h, maximize);
            if (maximize && v > slot.0) || (!maximize && v < slot.0) {
                *slot = (v, circle_point(t), slot.2);
            }
        }
        argmin = Some(lower.1);
        argmax = Some(upper.1);
        for limit in [2.0 * (p - 1.0) / p, 1.0, 0.5 * p] {
            if limit < lower.0 {
                lower.0 = limit;
                argmin = None;
            }
            if limit > upper.0 {
                upper.0 = limit;
                argmax = None;
            }
        }
    }
    Ok(ComparabilityScan {
        p,
        c_lower: lower.0,
        c_upper: upper.0,
        grid_spec: grid.clone(),
        argmin,
        argmax,
    })
}
