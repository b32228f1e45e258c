//! `∬_{S×S} Φ(x, y) |x - y|^{-s} dx dy` on the line, for symmetric `Φ`
//! vanishing like `|x - y|^q` on the diagonal.
//!
//! With `z = y - x` the integral is `2 ∫_0^Z z^{-s} H(z) dz`, where
//! `H(z) = ∫ Φ(x, x + z) dx` over `{x ∈ S, x + z ∈ S}`. The outer variable
//! runs over Gauss–Legendre panels graded geometrically towards `z = 0` and
//! cut at every difference of two breakpoints (where `H` has kinks). For a
//! fixed `z` the inner integrand is smooth between the points `B` and
//! `B - z`, so each piece gets a fixed-level tanh-sinh rule. Below `z_min`
//! the model `H(z) ≈ c z^q` is integrated exactly.
//!
//! The reported error is the difference between two resolutions plus the
//! disagreement of the model constant `c` fitted at `z_min` and `2 z_min`.

use serde::{Deserialize, Serialize};

use super::gauss::gauss_legendre;
use super::tanh_sinh::TanhSinh;
use super::{EngineConfig, Estimate};
use crate::error::{HardyError, Result};
use crate::parallel::{pairwise_sum, par_map};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRule {
    /// Gauss–Legendre points per z-panel (fine / coarse resolution).
    pub gl_fine: usize,
    pub gl_coarse: usize,
    /// Tanh-sinh levels of the inner rule.
    pub ts_fine: u32,
    pub ts_coarse: u32,
    /// Smallest resolved `z`, relative to the smallest breakpoint spacing.
    pub z_floor: f64,
    /// Inner pieces and outer z-panels are at most this fraction of the
    /// shortest segment.
    pub max_piece: f64,
}

impl Default for DiagonalRule {
    fn default() -> Self {
        Self {
            gl_fine: 10,
            gl_coarse: 6,
            ts_fine: 3,
            ts_coarse: 2,
            z_floor: 1e-8,
            max_piece: 1.0 / 8.0,
        }
    }
}

/// Support of the pair integrand and the points where it is not smooth.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairGeometry {
    /// Disjoint closed segments, sorted.
    pub segments: Vec<(f64, f64)>,
    /// Kinks of `Φ` in either variable.
    pub breakpoints: Vec<f64>,
    /// Inner pieces spanning more than a factor 4 in distance to this point
    /// are split geometrically (integrands that vary on the scale of the
    /// distance to a boundary).
    pub grading_origin: Option<f64>,
}

impl PairGeometry {
    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(HardyError::invalid("pair geometry needs at least one segment"));
        }
        let mut segs = segments;
        segs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, &(a, b)) in segs.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(HardyError::invalid(format!("bad segment [{a}, {b}]")));
            }
            if i > 0 && segs[i - 1].1 > a {
                return Err(HardyError::invalid("segments overlap"));
            }
        }
        Ok(Self {
            segments: segs,
            breakpoints: Vec::new(),
            grading_origin: None,
        })
    }

    pub fn with_breakpoints(mut self, pts: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(pts);
        self
    }

    pub fn graded_toward(mut self, origin: f64) -> Self {
        self.grading_origin = Some(origin);
        self
    }

    fn hull(&self) -> (f64, f64) {
        (self.segments[0].0, self.segments[self.segments.len() - 1].1)
    }

    /// Segment endpoints and interior breakpoints, sorted and deduplicated.
    fn points(&self) -> Vec<f64> {
        let (lo, hi) = self.hull();
        let mut pts: Vec<f64> = self
            .segments
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(self.breakpoints.iter().copied().filter(|b| *b > lo && *b < hi))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
        pts
    }
}

/// Computes `∬_{S×S} phi(x, y) |x-y|^{-s} dx dy` (both orderings of the
/// pair), assuming `phi` symmetric and `phi(x, x+z) = O(z^order)`.
pub fn double_singular_1d(
    phi: &(impl Fn(f64, f64) -> f64 + Sync),
    geometry: &PairGeometry,
    s: f64,
    order: f64,
    config: &EngineConfig,
) -> Result<Estimate> {
    if !(s > 0.0) {
        return Err(HardyError::invalid(format!("kernel exponent must be positive, got {s}")));
    }
    let tail_exp = order - s + 1.0;
    if !(tail_exp > 0.0) {
        return Err(HardyError::Divergence(format!(
            "diagonal order {order} cannot compensate |x-y|^-{s}"
        )));
    }
    let rule = config.diagonal;
    let pts = geometry.points();
    let (lo, hi) = geometry.hull();
    let span = hi - lo;
    let feature = pts
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|g| *g > 0.0)
        .fold(span, f64::min);
    let z_min = feature * rule.z_floor;

    let shortest = geometry
        .segments
        .iter()
        .map(|&(a, b)| b - a)
        .fold(f64::INFINITY, f64::min);
    let max_piece = shortest * rule.max_piece;
    let panels = z_panels(&pts, z_min, span, max_piece);
    let fine = gauss_legendre(rule.gl_fine);
    let coarse = gauss_legendre(rule.gl_coarse);

    // (z, weight, level, is_fine)
    let mut nodes: Vec<(f64, f64, u32, bool)> = Vec::new();
    for &(a, b) in &panels {
        for (z, w) in fine.mapped(a, b) {
            nodes.push((z, w, rule.ts_fine, true));
        }
        for (z, w) in coarse.mapped(a, b) {
            nodes.push((z, w, rule.ts_coarse, false));
        }
    }
    nodes.push((z_min, 0.0, rule.ts_fine, true));
    nodes.push((2.0 * z_min, 0.0, rule.ts_fine, true));

    let inner =
        |&(z, _, level, _): &(f64, f64, u32, bool)| slice_integral(phi, geometry, &pts, z, level, max_piece);
    let values = par_map(config.parallelism, &nodes, inner);

    let mut fine_terms = Vec::new();
    let mut coarse_terms = Vec::new();
    let mut evals = 0u64;
    for (&(z, w, _, is_fine), &(h, n)) in nodes.iter().zip(&values) {
        evals += n;
        if w == 0.0 {
            continue;
        }
        let term = w * z.powf(-s) * h;
        if is_fine {
            fine_terms.push(term);
        } else {
            coarse_terms.push(term);
        }
    }
    let i_fine = pairwise_sum(&fine_terms);
    let i_coarse = pairwise_sum(&coarse_terms);
    let abs_sum: f64 = fine_terms.iter().map(|t| t.abs()).sum();

    let h1 = values[values.len() - 2].0;
    let h2 = values[values.len() - 1].0;
    if h1 != 0.0 && h2 != 0.0 && h1.signum() == h2.signum() {
        let q_emp = (h2 / h1).log2();
        if q_emp - s + 1.0 <= 0.0 && h2.abs() > 1e-12 * abs_sum.max(f64::MIN_POSITIVE) {
            return Err(HardyError::Divergence(format!(
                "near-diagonal slices scale like z^{q_emp:.3}, not integrable against |x-y|^-{s}"
            )));
        }
    }
    let c1 = h1 / z_min.powf(order);
    let c2 = h2 / (2.0 * z_min).powf(order);
    let tail = c1 * z_min.powf(tail_exp) / tail_exp;
    let tail_err = if c1 != 0.0 {
        tail.abs() * (c2 / c1 - 1.0).abs()
    } else {
        (c2 * z_min.powf(tail_exp) / tail_exp).abs()
    };

    let value = 2.0 * (i_fine + tail);
    let error = 2.0 * ((i_fine - i_coarse).abs() + tail_err + 32.0 * f64::EPSILON * abs_sum);
    Ok(Estimate::deterministic(value, error, evals))
}

/// Outer panels on `[z_min, span]`: consecutive ends at most a factor 2
/// and `max_width` apart, with every breakpoint difference as a panel end.
fn z_panels(pts: &[f64], z_min: f64, span: f64, max_width: f64) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = b - a;
            if d > z_min && d < span {
                cuts.push(d);
            }
        }
    }
    cuts.push(span);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
    let mut panels = Vec::new();
    let mut cur = z_min;
    for &c in &cuts {
        while cur < c {
            let step = (2.0 * cur).min(cur + max_width);
            let next = if step >= c * (1.0 - 1e-12) { c } else { step };
            panels.push((cur, next));
            cur = next;
        }
    }
    panels
}

/// `H(z) = ∫ phi(x, x+z) dx` over `{x ∈ S, x + z ∈ S}`; returns the value
/// and the number of evaluations.
fn slice_integral(
    phi: &impl Fn(f64, f64) -> f64,
    geometry: &PairGeometry,
    pts: &[f64],
    z: f64,
    level: u32,
    max_piece: f64,
) -> (f64, u64) {
    let ts = TanhSinh::compact();
    let mut total = 0.0;
    let mut evals = 0;
    let mut cuts: Vec<f64> = Vec::new();
    for &(li, ri) in &geometry.segments {
        for &(lj, rj) in &geometry.segments {
            let lo = li.max(lj - z);
            let hi = ri.min(rj - z);
            if !(hi > lo) {
                continue;
            }
            cuts.clear();
            cuts.push(lo);
            cuts.push(hi);
            for &b in pts {
                if b > lo && b < hi {
                    cuts.push(b);
                }
                let c = b - z;
                if c > lo && c < hi {
                    cuts.push(c);
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for w in cuts.windows(2) {
                for (a, b) in graded(w[0], w[1], geometry.grading_origin) {
                    if b <= a {
                        continue;
                    }
                    let k = ((b - a) / max_piece).ceil().max(1.0);
                    let step = (b - a) / k;
                    for i in 0..k as usize {
                        let c = a + i as f64 * step;
                        let d = if i + 1 == k as usize { b } else { c + step };
                        let (v, n) = ts.integrate_level(|q| phi(q.x, q.x + z), c, d, level);
                        total += v;
                        evals += n;
                    }
                }
            }
        }
    }
    (total, evals)
}

fn graded(a: f64, b: f64, origin: Option<f64>) -> Vec<(f64, f64)> {
    match origin {
        Some(o) if a - o > 0.0 && (b - o) > 4.0 * (a - o) => {
            let mut out = Vec::new();
            let mut lo = a;
            while b - o > 4.0 * (lo - o) {
                let next = o + 4.0 * (lo - o);
                out.push((lo, next));
                lo = next;
            }
            out.push((lo, b));
            out
        }
        _ => vec![(a, b)],
    }
}
