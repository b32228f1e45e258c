//! Evaluation of `E_p[u]` and weighted norms for one-dimensional domains
//! (finite unions of intervals, possibly unbounded), and the Monte Carlo
//! pair integrand for the half-space in `d ≥ 2`.

use super::testfn::TestFunction;
use crate::bregman::spow;
use crate::error::{HardyError, Result};
use crate::quadrature::{
    double_singular_1d, integrate_offsets, integrate_semi_infinite, Abscissa, EngineConfig,
    Estimate, McPairIntegrand, PairGeometry,
};

/// `(u(x) - u(y))(u(x)^{⟨p-1⟩} - u(y)^{⟨p-1⟩})`.
#[inline]
pub(crate) fn pair_density(ux: f64, uy: f64, p: f64) -> f64 {
    (ux - uy) * (spow(ux, p - 1.0) - spow(uy, p - 1.0))
}

/// A point of a support segment with exact distances to the segment ends.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SegPoint {
    pub x: f64,
    pub seg: usize,
    pub from_lo: f64,
    pub from_hi: f64,
}

/// `Σ_segments ∫ g(point) dx`, splitting every segment at `u`'s kinks, at
/// `extra_cuts`, and geometrically towards `origin` when given.
pub(crate) fn segment_integral(
    u: &TestFunction,
    extra_cuts: &[f64],
    origin: Option<f64>,
    tol: f64,
    g: impl Fn(SegPoint) -> f64,
) -> Result<Estimate> {
    let segs = u.segments();
    let mut total = Estimate::zero();
    let pieces_total: usize = segs.len();
    for (i, &(a, b)) in segs.iter().enumerate() {
        let mut cuts = vec![a, b];
        cuts.extend(u.breakpoints(0).iter().copied().filter(|t| *t > a && *t < b));
        cuts.extend(extra_cuts.iter().copied().filter(|t| *t > a && *t < b));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            match origin {
                Some(o) if w[0] - o > 0.0 && w[1] - o > 4.0 * (w[0] - o) => {
                    let mut lo = w[0];
                    while w[1] - o > 4.0 * (lo - o) {
                        let next = o + 4.0 * (lo - o);
                        pieces.push((lo, next));
                        lo = next;
                    }
                    pieces.push((lo, w[1]));
                }
                _ => pieces.push((w[0], w[1])),
            }
        }
        let share = tol / (pieces.len() * pieces_total) as f64;
        let at = |t: f64, from_lo: bool| {
            let (x, lo, hi) = if from_lo { (a + t, t, (b - a) - t) } else { (b - t, (b - a) - t, t) };
            g(SegPoint { x, seg: i, from_lo: lo, from_hi: hi })
        };
        for (c, d) in pieces {
            // Near the ends of the support `x` itself cannot resolve the
            // offset, so the last `END_CUT` of the piece uses a power model.
            let delta = END_CUT * (d - c);
            let mut lo_cut = 0.0;
            let mut hi_cut = 0.0;
            if c == a {
                if let Some(e) = end_model(|t| at(t, true), delta) {
                    total = total.combine(&e);
                    lo_cut = delta;
                }
            }
            if d == b {
                if let Some(e) = end_model(|t| at(t, false), delta) {
                    total = total.combine(&e);
                    hi_cut = delta;
                }
            }
            let (c0, d0) = (c + lo_cut, d - hi_cut);
            let est = integrate_offsets(
                |q: Abscissa| {
                    g(SegPoint {
                        x: q.x,
                        seg: i,
                        from_lo: (c - a) + lo_cut + q.from_lo,
                        from_hi: (b - d) + hi_cut + q.from_hi,
                    })
                },
                c0,
                d0,
                share,
            )?;
            total = total.combine(&est);
        }
    }
    Ok(total)
}

/// Length of the end layer handled by [`end_model`], relative to the piece.
const END_CUT: f64 = 1e-7;

/// `∫_0^δ h(t) dt` for `h ≈ C t^q`, with `q` fitted from `h(δ)`, `h(δ/4)`
/// and checked against the fit from `h(δ/4)`, `h(δ/16)`. `None` when `h`
/// does not look like a single integrable power.
fn end_model(h: impl Fn(f64) -> f64, delta: f64) -> Option<Estimate> {
    let (h1, h2, h3) = (h(delta), h(0.25 * delta), h(0.0625 * delta));
    if h1 == 0.0 && h2 == 0.0 && h3 == 0.0 {
        return Some(Estimate::deterministic(0.0, 0.0, 3));
    }
    if !(h1 * h2 > 0.0 && h2 * h3 > 0.0) || !(h1.is_finite() && h2.is_finite() && h3.is_finite()) {
        return None;
    }
    let q1 = (h1 / h2).ln() / 4f64.ln();
    let q2 = (h2 / h3).ln() / 4f64.ln();
    if !(q1 > -0.99 && q2 > -0.99) {
        return None;
    }
    // model 2: q2 on [0, δ/4], q1 on [δ/4, δ]
    let v1 = h1 * delta / (q1 + 1.0);
    let v2 = h2 * 0.25 * delta / (q2 + 1.0) + (v1 - h2 * 0.25 * delta / (q1 + 1.0));
    Some(Estimate::deterministic(v1, (v1 - v2).abs() + 1e-15 * v1.abs(), 3))
}

/// Maximal intervals of `domain \ segments`, with `±∞` allowed.
pub(crate) fn gaps(domain: &[(f64, f64)], segments: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    for &(a, b) in segments {
        if !domain.iter().any(|&(c, d)| c <= a && b <= d) {
            return Err(HardyError::domain(format!(
                "support segment [{a}, {b}] is not inside the domain {domain:?}"
            )));
        }
    }
    let mut out = Vec::new();
    for &(c, d) in domain {
        let mut cur = c;
        let mut inside: Vec<&(f64, f64)> = segments.iter().filter(|s| s.0 >= c && s.1 <= d).collect();
        inside.sort_by(|x, y| x.0.total_cmp(&y.0));
        for s in inside {
            if s.0 > cur {
                out.push((cur, s.0));
            }
            cur = cur.max(s.1);
        }
        if d > cur {
            out.push((cur, d));
        }
    }
    Ok(out)
}

/// Distance from the segment point to the near end of `gap`, computed from
/// the exact segment offsets, and to the far end.
fn gap_distances(pt: &SegPoint, seg: (f64, f64), gap: (f64, f64)) -> (f64, f64) {
    if gap.1 <= seg.0 {
        let near = (seg.0 - gap.1) + pt.from_lo;
        let far = (seg.0 - gap.0) + pt.from_lo;
        (near, far)
    } else {
        let near = (gap.0 - seg.1) + pt.from_hi;
        let far = (gap.1 - seg.1) + pt.from_hi;
        (near, far)
    }
}

/// `∫_{gaps} |x - y|^{-1-α} dy`.
pub(crate) fn outside_kernel(pt: &SegPoint, seg: (f64, f64), gaps: &[(f64, f64)], alpha: f64) -> f64 {
    gaps.iter()
        .map(|&g| {
            let (near, far) = gap_distances(pt, seg, g);
            let far_term = if far.is_finite() { far.powf(-alpha) } else { 0.0 };
            (near.powf(-alpha) - far_term) / alpha
        })
        .sum()
}

/// `y^c - n^c` from the offset `e = |y - n|` (`sign` = +1 for `y > n`).
fn power_increment(n: f64, c: f64, e: f64, sign: f64) -> f64 {
    if e < 0.5 * n {
        n.powf(c) * (c * (sign * e / n).ln_1p()).exp_m1()
    } else {
        (n + sign * e).max(0.0).powf(c) - n.powf(c)
    }
}

/// `∫_{gap} y^c |x - y|^{-1-α} dy` for a gap in `(0, ∞)`.
///
/// The part `n^c ∫ |x-y|^{-1-α}` (with `n` the gap end nearest to `x`) is
/// exact; the remainder `∫ (y^c - n^c) |x-y|^{-1-α}` is integrated with
/// offsets measured from `n`.
pub(crate) fn power_gap_kernel(
    pt: &SegPoint,
    seg: (f64, f64),
    gap: (f64, f64),
    c: f64,
    alpha: f64,
    tol: f64,
) -> Result<f64> {
    let (t, far) = gap_distances(pt, seg, gap);
    let far_term = if far.is_finite() { far.powf(-alpha) } else { 0.0 };
    let left = gap.1 <= seg.0;
    let n = if left { gap.1 } else { gap.0 };
    let constant = n.powf(c) * (t.powf(-alpha) - far_term) / alpha;
    if c == 0.0 {
        return Ok(constant);
    }
    let local_tol = tol * (1.0 + constant.abs());
    let rem = if left {
        integrate_offsets(
            |q: Abscissa| {
                let e = q.from_hi;
                let inc = if q.from_lo < e && gap.0 == 0.0 {
                    q.from_lo.powf(c) - n.powf(c)
                } else {
                    power_increment(n, c, e, -1.0)
                };
                inc * (t + e).powf(-1.0 - alpha)
            },
            gap.0,
            gap.1,
            local_tol,
        )?
    } else if gap.1.is_finite() {
        integrate_offsets(
            |q: Abscissa| power_increment(n, c, q.from_lo, 1.0) * (t + q.from_lo).powf(-1.0 - alpha),
            gap.0,
            gap.1,
            local_tol,
        )?
    } else {
        integrate_semi_infinite(
            |_, e| power_increment(n, c, e, 1.0) * (t + e).powf(-1.0 - alpha),
            gap.0,
            n.max(t),
            local_tol,
        )?
    };
    Ok(constant + rem.value)
}

/// `E_p[u]` on a one-dimensional open set given as disjoint intervals.
pub(crate) fn form_1d(
    u: &TestFunction,
    domain: &[(f64, f64)],
    p: f64,
    alpha: f64,
    origin: Option<f64>,
    config: &EngineConfig,
) -> Result<Estimate> {
    let segs = u.segments().to_vec();
    let gaps = gaps(domain, &segs)?;
    let mut geometry = PairGeometry::new(segs.clone())?.with_breakpoints(u.line_points());
    if let Some(o) = origin {
        geometry = geometry.graded_toward(o);
    }
    let phi = |x: f64, y: f64| pair_density(u.eval1(x), u.eval1(y), p);
    let inner = double_singular_1d(&phi, &geometry, 1.0 + alpha, 2.0, config)?.scale(0.5);
    if gaps.is_empty() {
        return Ok(inner);
    }
    let outer = segment_integral(u, &[], origin, config.tol, |pt| {
        let up = u.eval1(pt.x).abs().powf(p);
        if up == 0.0 {
            return 0.0;
        }
        up * outside_kernel(&pt, segs[pt.seg], &gaps, alpha)
    })?;
    Ok(inner.combine(&outer))
}

/// Half-space pair integrand for the Monte Carlo engine.
pub(crate) struct HalfspacePairs<'a> {
    pub u: &'a TestFunction,
    pub p: f64,
}

impl McPairIntegrand for HalfspacePairs<'_> {
    fn dim(&self) -> usize {
        self.u.dim()
    }

    fn sample_box(&self) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.u.support_box();
        (lo.to_vec(), hi.to_vec())
    }

    fn phi(&self, x: &[f64], y: &[f64]) -> f64 {
        pair_density(self.u.eval(x), self.u.eval(y), self.p)
    }

    fn u_pow(&self, x: &[f64]) -> f64 {
        self.u.eval(x).abs().powf(self.p)
    }

    fn in_domain(&self, y: &[f64]) -> bool {
        y[y.len() - 1] > 0.0
    }

    fn exit_distance(&self, x: &[f64], dir: &[f64]) -> f64 {
        let d = x.len() - 1;
        if dir[d] < 0.0 {
            x[d] / -dir[d]
        } else {
            f64::INFINITY
        }
    }
}
