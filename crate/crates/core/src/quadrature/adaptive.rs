use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gauss::gk15;
use super::tanh_sinh::{Abscissa, TanhSinh};
use super::Estimate;
use crate::error::{HardyError, Result};

/// Which endpoints may carry an integrable singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Endpoints {
    pub lo_singular: bool,
    pub hi_singular: bool,
}

impl Endpoints {
    pub const REGULAR: Endpoints = Endpoints {
        lo_singular: false,
        hi_singular: false,
    };
    pub const BOTH: Endpoints = Endpoints {
        lo_singular: true,
        hi_singular: true,
    };
    pub const LO: Endpoints = Endpoints {
        lo_singular: true,
        hi_singular: false,
    };
    pub const HI: Endpoints = Endpoints {
        lo_singular: false,
        hi_singular: true,
    };

    fn any(self) -> bool {
        self.lo_singular || self.hi_singular
    }
}

const MAX_SPLIT_DEPTH: u32 = 14;
const MAX_GK_PANELS: usize = 5000;

/// `∫_a^b f`, with endpoint-aware evaluation.
///
/// Uses tanh-sinh (double-exponential endpoint substitution); if a level
/// sweep does not converge the interval is bisected and each half retried.
/// Offsets handed to `f` are always measured from the original `a` and `b`.
pub fn integrate_offsets(f: impl Fn(Abscissa) -> f64, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    check_interval(a, b, tol)?;
    if a == b {
        return Ok(Estimate::zero());
    }
    let mut nodes = 0;
    let (value, error, ok) = split_tanh_sinh(&f, a, b, a, b, tol, 0, &mut nodes);
    let est = Estimate::deterministic(value, error, nodes);
    if ok {
        Ok(est)
    } else {
        Err(HardyError::QuadratureFailure {
            reason: format!("tanh-sinh on [{a}, {b}] did not reach tol {tol:e}"),
            partial: est,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn split_tanh_sinh(
    f: &impl Fn(Abscissa) -> f64,
    a0: f64,
    b0: f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    nodes: &mut u64,
) -> (f64, f64, bool) {
    let shifted = |q: Abscissa| {
        f(Abscissa {
            x: q.x,
            from_lo: (a - a0) + q.from_lo,
            from_hi: (b0 - b) + q.from_hi,
        })
    };
    let (v, e, n, ok) = TanhSinh::standard().integrate_adaptive(shifted, a, b, tol);
    *nodes += n;
    if ok || depth >= MAX_SPLIT_DEPTH {
        return (v, e, ok);
    }
    let m = 0.5 * (a + b);
    let (v1, e1, ok1) = split_tanh_sinh(f, a0, b0, a, m, 0.5 * tol, depth + 1, nodes);
    let (v2, e2, ok2) = split_tanh_sinh(f, a0, b0, m, b, 0.5 * tol, depth + 1, nodes);
    (v1 + v2, e1 + e2, ok1 && ok2)
}

fn check_interval(a: f64, b: f64, tol: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(HardyError::invalid(format!("bad integration interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(HardyError::invalid("tolerance must be positive"));
    }
    Ok(())
}

/// `∫_a^b f(x) dx` to absolute tolerance `tol`.
///
/// Regular integrands go to globally adaptive Gauss–Kronrod; flagged
/// endpoints switch to the endpoint-substituted tanh-sinh rule.
pub fn integrate_1d(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    endpoints: Endpoints,
    tol: f64,
) -> Result<Estimate> {
    check_interval(a, b, tol)?;
    if a == b {
        return Ok(Estimate::zero());
    }
    if endpoints.any() {
        integrate_offsets(
            |q| {
                if q.x <= a || q.x >= b {
                    0.0
                } else {
                    f(q.x)
                }
            },
            a,
            b,
            tol,
        )
    } else {
        gauss_kronrod_adaptive(&f, a, b, tol)
    }
}

/// Sum of [`integrate_1d`] over the pieces cut by `breaks`.
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    breaks: &[f64],
    endpoints: Endpoints,
    tol: f64,
) -> Result<Estimate> {
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let pieces = pts.len().saturating_sub(1).max(1);
    let mut total = Estimate::zero();
    for w in pts.windows(2) {
        total = total.combine(&integrate_1d(&f, w[0], w[1], endpoints, tol / pieces as f64)?);
    }
    Ok(total)
}

/// `∫_a^∞ f(y) dy` through `y = a + scale·s/(1-s)`; `f` receives `(y, y - a)`.
pub fn integrate_semi_infinite(
    f: impl Fn(f64, f64) -> f64,
    a: f64,
    scale: f64,
    tol: f64,
) -> Result<Estimate> {
    if !(scale > 0.0) {
        return Err(HardyError::invalid("scale must be positive"));
    }
    integrate_offsets(
        |q| {
            let v = q.from_hi;
            let dy = scale * q.from_lo / v;
            let y = a + dy;
            if !y.is_finite() || dy <= 0.0 {
                return 0.0;
            }
            f(y, dy) * scale / (v * v)
        },
        0.0,
        1.0,
        tol,
    )
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    heap.push(Panel { a, b, value: v, error: e });
    let mut evals = 15u64;
    loop {
        let total_err: f64 = heap.iter().map(|p| p.error).sum();
        if total_err <= tol {
            break;
        }
        if heap.len() >= MAX_GK_PANELS {
            let value = heap.iter().map(|p| p.value).sum();
            return Err(HardyError::QuadratureFailure {
                reason: format!("Gauss–Kronrod panel budget exhausted on [{a}, {b}]"),
                partial: Estimate::deterministic(value, total_err, evals),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel cannot be split further; accept its error.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, m);
        let (v2, e2) = gk15(f, m, worst.b);
        evals += 30;
        heap.push(Panel { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, error: e2 });
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum::<f64>() + 1e-15 * f64::abs(value);
    Ok(Estimate::deterministic(value, error, evals))
}
