use std::f64::consts::PI;

use super::gamma::{gamma_pair, ln_gamma};
use super::params::HardyParams;
use crate::error::{HardyError, Result};
use crate::quadrature::{integrate_offsets, Abscissa, Estimate};

/// Euler beta `B(x, y) = Γ(x)Γ(y)/Γ(x+y)` for all real `x, y ∉ {0, -1, -2, …}`.
///
/// Evaluated on the sign/log pairs, so large or negative arguments neither
/// overflow nor lose the sign; a pole of `Γ(x+y)` gives exactly 0.
pub fn beta_c(x: f64, y: f64) -> Result<f64> {
    let gx = gamma_pair(x);
    let gy = gamma_pair(y);
    if gx.is_pole() || gy.is_pole() {
        return Err(HardyError::domain(format!(
            "B({x}, {y}): arguments must avoid 0, -1, -2, …"
        )));
    }
    let gxy = gamma_pair(x + y);
    if gxy.is_pole() {
        return Ok(0.0);
    }
    let sign = f64::from(gx.sign * gy.sign * gxy.sign);
    Ok(sign * (gx.log_abs + gy.log_abs - gxy.log_abs).exp())
}

fn check_gamma_args(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a < 2.0) {
        return Err(HardyError::domain(format!("γ(a, b) needs a ∈ (0, 2), got {a}")));
    }
    if !(b > -1.0 && b < a) {
        return Err(HardyError::domain(format!(
            "γ(a, b) needs b ∈ (-1, a), got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

/// Closed form `γ(a, b) = B(b+1, -a) + B(a-b, -a) + 1/a`, valid for `a ≠ 1`.
pub fn gamma_ab_closed(a: f64, b: f64) -> Result<f64> {
    check_gamma_args(a, b)?;
    if a == 1.0 {
        return Err(HardyError::domain(
            "closed form of γ(a, b) has a removable pole at a = 1; use gamma_ab_quad",
        ));
    }
    Ok(beta_c(b + 1.0, -a)? + beta_c(a - b, -a)? + 1.0 / a)
}

/// `γ(a, b) = ∫₀¹ (t^b - 1)(1 - t^{a-b-1}) / (1-t)^{1+a} dt` by quadrature.
///
/// The integral is split at `t = 1/2`. Near `t = 0` the integrand grows like
/// `t^e` with `e = min(b, a-b-1, a-1)`, near `t = 1` like `(1-t)^{1-a}`;
/// either exponent may be close to `-1`, which puts most of the mass at
/// scales no quadrature rule reaches. The substitutions `t = u^m` and
/// `1 - t = v^n` with `m = 1/(1+e)`, `n = 1/(2-a)` (when these exceed 1)
/// make both ends bounded. Every factor is evaluated in log form from the
/// exact offsets supplied by the rule, so nothing under- or overflows.
pub fn gamma_ab_quad(a: f64, b: f64, tol: f64) -> Result<Estimate> {
    check_gamma_args(a, b)?;
    if !(tol > 0.0) {
        return Err(HardyError::invalid("tolerance must be positive"));
    }
    let c = a - b - 1.0;
    let m = (1.0 / (1.0 + b.min(c).min(a - 1.0))).max(1.0);
    let n = (1.0 / (2.0 - a)).max(1.0);
    let lower = |q: Abscissa| {
        let ln_u = q.from_lo.ln();
        let ln_t = m * ln_u;
        let nl = (-ln_t).ln();
        let (l1, s1) = ln_pow_minus_one(b, nl);
        let (l2, s2) = ln_pow_minus_one(c, nl);
        // (t^b - 1)(1 - t^c)(1-t)^{-1-a} · m u^{m-1}
        let ln_jac = m.ln() + (m - 1.0) * ln_u;
        -s1 * s2 * (l1 + l2 + ln_jac - (1.0 + a) * (-ln_t.exp()).ln_1p()).exp()
    };
    let upper = |q: Abscissa| {
        let ln_v = q.from_hi.ln();
        let ln_s = n * ln_v;
        // |ln t| = -ln(1 - s)
        let nl = if ln_s < -30.0 { ln_s } else { (-(-ln_s.exp()).ln_1p()).ln() };
        let (l1, s1) = ln_pow_minus_one(b, nl);
        let (l2, s2) = ln_pow_minus_one(c, nl);
        let ln_jac = n.ln() + (n - 1.0) * ln_v;
        -s1 * s2 * (l1 + l2 + ln_jac - (1.0 + a) * ln_s).exp()
    };
    let lo = integrate_offsets(lower, 0.0, 0.5f64.powf(1.0 / m), 0.5 * tol)?;
    let hi = integrate_offsets(upper, 1.0 - 0.5f64.powf(1.0 / n), 1.0, 0.5 * tol)?;
    Ok(lo.combine(&hi))
}

/// `(ln |t^e - 1|, sign(t^e - 1))` for `t ∈ (0, 1)` given `ln(-ln t)`.
fn ln_pow_minus_one(e: f64, ln_neg_ln_t: f64) -> (f64, f64) {
    if e == 0.0 {
        return (f64::NEG_INFINITY, 1.0);
    }
    // t^e - 1 = expm1(x) with x = e ln t
    let ln_abs_x = e.abs().ln() + ln_neg_ln_t;
    let x = -e.signum() * ln_abs_x.exp();
    if ln_abs_x < -20.0 {
        (ln_abs_x + 0.5 * x, x.signum())
    } else if x > 0.0 {
        (x + (-(-x).exp_m1()).ln(), 1.0)
    } else {
        ((-x.exp_m1()).ln(), -1.0)
    }
}

/// `π^{(d-1)/2} Γ((1+α)/2) / Γ((α+d)/2)`, half the surface integral of
/// `|ω_d|^α` over the unit sphere.
pub fn angular_factor(d: usize, alpha: f64) -> Result<f64> {
    if d == 0 {
        return Err(HardyError::invalid("dimension d must be at least 1"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(HardyError::invalid(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    let d = d as f64;
    Ok((0.5 * (d - 1.0) * PI.ln() + ln_gamma(0.5 * (1.0 + alpha)) - ln_gamma(0.5 * (alpha + d)))
        .exp())
}

/// The `p = 2` half-space constant
/// `κ_{d,α} = angular · (B((1+α)/2, (2-α)/2) - 2^α) / (α 2^α)`.
pub fn kappa_bd(d: usize, alpha: f64) -> Result<f64> {
    let ang = angular_factor(d, alpha)?;
    if alpha == 1.0 {
        // B(1, 1/2) = 2 cancels exactly
        return Ok(0.0);
    }
    let two_a = alpha.exp2();
    let b = beta_c(0.5 * (1.0 + alpha), 0.5 * (2.0 - alpha))?;
    Ok(ang * (b - two_a) / (alpha * two_a))
}

/// Sharp half-space constant `κ_{d,p,α} = -angular · γ(α, (α-1)/p)`.
///
/// At `α = 1` the value is the limit 0.
pub fn kappa(d: usize, p: f64, alpha: f64) -> Result<f64> {
    let params = HardyParams::new(d, p, alpha)?;
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let ang = angular_factor(d, alpha)?;
    Ok(-ang * gamma_ab_closed(alpha, params.beta())?)
}

/// Normalisation `A_{d,-α} = 2^α Γ((d+α)/2) / (π^{d/2} |Γ(-α/2)|)` of the
/// fractional Laplacian.
pub fn a_const(d: usize, alpha: f64) -> Result<f64> {
    HardyParams::new(d, 2.0, alpha)?;
    let d = d as f64;
    let g = gamma_pair(-0.5 * alpha);
    Ok((alpha * std::f64::consts::LN_2 + ln_gamma(0.5 * (d + alpha))
        - 0.5 * d * PI.ln()
        - g.log_abs)
        .exp())
}

/// `(1+s)^β + (1-s)^β - 2` for `|s| < 1` without cancellation.
///
/// Used for symmetric pairings of power weights around a singular point.
pub fn symmetric_power_difference(beta: f64, s: f64) -> f64 {
    let m = 0.5 * beta * (-s * s).ln_1p();
    let delta = beta * s.atanh();
    let half = (0.5 * delta).sinh();
    2.0 * (m.exp_m1() * delta.cosh() + 2.0 * half * half)
}

/// `g(β) = (p-1)(t^β-1)(1-t^{α-β-1}) + (t^{(p-1)β}-1)(1-t^{α-(p-1)β-1})`,
/// the numerator of `(p-1)γ(α,β) + γ(α,(p-1)β)` at a fixed `t ∈ (0,1)`.
pub fn weight_profile(t: f64, p: f64, alpha: f64, beta: f64) -> f64 {
    let q = (p - 1.0) * beta;
    (p - 1.0) * (t.powf(beta) - 1.0) * (1.0 - t.powf(alpha - beta - 1.0))
        + (t.powf(q) - 1.0) * (1.0 - t.powf(alpha - q - 1.0))
}

/// Minimum of [`weight_profile`] over `β`: `-p (t^β - 1)(t^{β'} - 1) ≤ 0`
/// at `β = (α-1)/p`, `β' = (p-1)(α-1)/p` (there `α-β-1 = β'` and
/// `α-β'-1 = β`, so both terms are multiples of the same product).
pub fn weight_profile_at_optimum(t: f64, p: f64, alpha: f64) -> f64 {
    let beta = (alpha - 1.0) / p;
    let beta_conj = (p - 1.0) * beta;
    -p * (t.powf(beta) - 1.0) * (t.powf(beta_conj) - 1.0)
}
