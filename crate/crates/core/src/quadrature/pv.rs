use super::adaptive::{integrate_1d, integrate_semi_infinite, Endpoints};
use super::Estimate;
use crate::error::{HardyError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PvDomain {
    /// `(a, b)`
    Interval(f64, f64),
    /// `(a, ∞)`
    HalfLine(f64),
    Line,
}

/// Integrand of a principal-value integral with one singular point `x0`.
pub trait SingularIntegrand: Sync {
    fn eval(&self, y: f64) -> f64;

    /// `f(x0 + h) + f(x0 - h)`. Override with a cancellation-free form and
    /// return `true` from [`stable_pairing`](Self::stable_pairing) when one
    /// is available.
    fn paired(&self, x0: f64, h: f64) -> f64 {
        self.eval(x0 + h) + self.eval(x0 - h)
    }

    fn stable_pairing(&self) -> bool {
        false
    }
}

/// `P.V. ∫ f(y) dy`, symmetric about `x0`.
///
/// The symmetric window `(x0 - δ, x0 + δ)`, with `δ` half the distance to the
/// nearest finite endpoint, is folded onto `(0, δ)` through
/// [`SingularIntegrand::paired`]. Stable pairings are integrated directly
/// (they are at worst algebraically singular at `h = 0`); otherwise the
/// folded integral is cut at `η ∈ {η₀, η₀/2, η₀/4}` and extrapolated.
pub fn pv_integral(
    f: &impl SingularIntegrand,
    domain: PvDomain,
    x0: f64,
    tol: f64,
) -> Result<Estimate> {
    let delta = match domain {
        PvDomain::Interval(a, b) => {
            if !(a < x0 && x0 < b) {
                return Err(HardyError::domain(format!("{x0} is not inside ({a}, {b})")));
            }
            0.5 * (x0 - a).min(b - x0)
        }
        PvDomain::HalfLine(a) => {
            if !(a < x0) {
                return Err(HardyError::domain(format!("{x0} is not inside ({a}, ∞)")));
            }
            0.5 * (x0 - a)
        }
        PvDomain::Line => 1.0f64.max(0.5 * x0.abs()),
    };
    if !(tol > 0.0) {
        return Err(HardyError::invalid("tolerance must be positive"));
    }
    check_cancellation(f, x0, delta)?;

    let near = if f.stable_pairing() {
        integrate_1d(|h| f.paired(x0, h), 0.0, delta, Endpoints::LO, 0.5 * tol)?
    } else {
        extrapolated_near(f, x0, delta, 0.5 * tol)?
    };

    let far_tol = 0.25 * tol;
    let left = match domain {
        PvDomain::Interval(a, _) | PvDomain::HalfLine(a) => {
            integrate_1d(|y| f.eval(y), a, x0 - delta, Endpoints::BOTH, far_tol)?
        }
        PvDomain::Line => integrate_semi_infinite(|_, t| f.eval(x0 - delta - t), 0.0, delta, far_tol)?,
    };
    let right = match domain {
        PvDomain::Interval(_, b) => integrate_1d(|y| f.eval(y), x0 + delta, b, Endpoints::BOTH, far_tol)?,
        PvDomain::HalfLine(_) | PvDomain::Line => {
            integrate_semi_infinite(|y, _| f.eval(y), x0 + delta, 2.0 * delta, far_tol)?
        }
    };
    Ok(near.combine(&left).combine(&right))
}

/// `h·|paired(h)|` must shrink as `h → 0`; if it grows the odd part of the
/// singularity does not cancel and no principal value exists.
fn check_cancellation(f: &impl SingularIntegrand, x0: f64, delta: f64) -> Result<()> {
    let probe = |h: f64| h * f.paired(x0, h).abs();
    let (h1, h2, h3) = (delta * 1e-2, delta * 1e-4, delta * 1e-6);
    let (q1, q2, q3) = (probe(h1), probe(h2), probe(h3));
    if q3 > 2.0 * q2 && q2 > 2.0 * q1 && q3 > 1e-300 {
        return Err(HardyError::Divergence(format!(
            "pairing about {x0} does not cancel: h·|f(x0+h)+f(x0-h)| grows as h → 0"
        )));
    }
    Ok(())
}

fn extrapolated_near(f: &impl SingularIntegrand, x0: f64, delta: f64, tol: f64) -> Result<Estimate> {
    let eta0 = delta / 16.0;
    let etas = [eta0, eta0 / 2.0, eta0 / 4.0];
    let piece = |lo: f64, hi: f64| integrate_1d(|h| f.paired(x0, h), lo, hi, Endpoints::REGULAR, tol / 8.0);
    let outer = piece(eta0, delta)?;
    let s1 = piece(etas[1], etas[0])?;
    let s2 = piece(etas[2], etas[1])?;
    let n0 = outer.value;
    let n1 = n0 + s1.value;
    let n2 = n1 + s2.value;
    let quad_err = outer.error + s1.error + s2.error;
    let d1 = n1 - n0;
    let d2 = n2 - n1;
    // Geometric remainder with ratio r = d2/d1 (the leading error is a power
    // of η, so successive halvings shrink by a fixed factor).
    let (value, extra) = if d1 != 0.0 && (d2 / d1) > 0.0 && (d2 / d1) < 1.0 {
        let r = d2 / d1;
        let tail = d2 * r / (1.0 - r);
        (n2 + tail, tail.abs())
    } else {
        (n2, d2.abs())
    };
    Ok(Estimate::deterministic(
        value,
        quad_err + extra,
        outer.samples_or_nodes + s1.samples_or_nodes + s2.samples_or_nodes,
    ))
}
