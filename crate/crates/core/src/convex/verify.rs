use super::body::ConvexBody;
use super::potential::direction_breaks;
use crate::error::{HardyError, Result};
use crate::halfspace::form::{form_1d, pair_density, segment_integral};
use crate::halfspace::{HardyReport, TestFunction, DEGENERATE_RHS};
use crate::quadrature::{
    double_singular_mc, gauss_legendre, integrate_1d, sphere_quad_with_breaks, tensor_gauss,
    Endpoints, EngineConfig, Estimate, McPairIntegrand,
};
use crate::specfun::{angular_factor, kappa, HardyParams};

/// Rejects `α ≤ 1`, for which no positive constant exists on bounded
/// convex domains.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0) {
        return Err(HardyError::invalid(format!(
            "alpha = {alpha}: for α ≤ 1 the Hardy inequality cannot hold with a positive constant on bounded convex domains"
        )));
    }
    if !(alpha < 2.0) {
        return Err(HardyError::invalid(format!("alpha must lie in (1, 2), got {alpha}")));
    }
    Ok(())
}

fn check_components(j: &[(f64, f64)]) -> Result<()> {
    if j.is_empty() {
        return Err(HardyError::invalid("J needs at least one interval"));
    }
    for w in j.windows(2) {
        if !(w[0].1 <= w[1].0) {
            return Err(HardyError::invalid("components of J must be sorted and disjoint"));
        }
    }
    if j.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
        return Err(HardyError::invalid("components of J must be bounded, nonempty intervals"));
    }
    Ok(())
}

fn degenerate(name: &str, rhs: &Estimate) -> Result<()> {
    if !(rhs.value.abs() >= DEGENERATE_RHS) {
        return Err(HardyError::Degenerate(format!("{name}: weighted norm {} vanishes", rhs.value)));
    }
    Ok(())
}

/// `∫_J |u|^p dist(x, ∂J)^{-α}` for `J` a finite union of bounded intervals.
pub fn interval_weighted_norm(u: &TestFunction, j: &[(f64, f64)], p: f64, alpha: f64, config: &EngineConfig) -> Result<Estimate> {
    check_components(j)?;
    let segs = u.segments().to_vec();
    let mut owner = Vec::with_capacity(segs.len());
    for &(a, b) in &segs {
        let c = j
            .iter()
            .position(|&(c0, c1)| c0 <= a && b <= c1)
            .ok_or_else(|| HardyError::domain(format!("support segment [{a}, {b}] is not inside J")))?;
        owner.push(c);
    }
    let mids: Vec<f64> = j.iter().map(|&(a, b)| 0.5 * (a + b)).collect();
    segment_integral(u, &mids, None, config.tol, |pt| {
        let up = u.eval1(pt.x).abs().powf(p);
        if up == 0.0 {
            return 0.0;
        }
        let (c0, c1) = j[owner[pt.seg]];
        let (s0, s1) = segs[pt.seg];
        let dist = ((s0 - c0) + pt.from_lo).min((c1 - s1) + pt.from_hi);
        up * dist.powf(-alpha)
    })
}

/// Checks `E_p^J[u] ≥ κ_{1,p,α} ∫_J |u|^p dist(x, ∂J)^{-α}` on a finite
/// union of disjoint bounded intervals `J`.
pub fn verify_interval(u: &TestFunction, j: &[(f64, f64)], p: f64, alpha: f64, config: &EngineConfig) -> Result<HardyReport> {
    check_alpha(alpha)?;
    HardyParams::new(1, p, alpha)?;
    if u.dim() != 1 {
        return Err(HardyError::invalid("interval verification needs a one-dimensional test function"));
    }
    let rhs = interval_weighted_norm(u, j, p, alpha, config)?;
    degenerate(u.name(), &rhs)?;
    let lhs = form_1d(u, j, p, alpha, None, config)?;
    HardyReport::new(u.name(), lhs, rhs, kappa(1, p, alpha)?)
}

/// `m_α(x)^{-α} = ∫_{S^{d-1}} d_{ω,Ω}(x)^{-α} dω / ∫_{S^{d-1}} |ω_d|^α dω`.
pub fn m_alpha_neg_pow(x: &[f64], body: &ConvexBody, alpha: f64, config: &EngineConfig) -> Result<f64> {
    let d = body.dim();
    let dist = body.dist_boundary(x)?;
    let numer = 2.0 * angular_factor(d, alpha)?;
    if d == 1 {
        // both directions see the nearer end
        return Ok(2.0 * dist.powf(-alpha) / numer);
    }
    let area = if d == 2 { std::f64::consts::TAU } else { 4.0 * std::f64::consts::PI };
    let tol = config.tol * area * dist.powf(-alpha);
    if d == 3 {
        return ball_m_alpha_neg_pow_3d(x, body, alpha, tol).map(|den| den / numer);
    }
    let breaks = direction_breaks(x, body);
    let den = sphere_quad_with_breaks(|w| body.dir_dist_unchecked(x, w).powf(-alpha), d, &breaks, tol)?;
    Ok(den.value / numer)
}

/// `∫_{S²} d_ω^{-α}` for a ball. With the pole on `x - c`, `|x - c| = s`,
/// `d_ω = √(s²μ² + R² - s²) - s|μ|` depends on `μ` only. Other bodies in
/// three dimensions have kinks along curves no product rule can follow.
fn ball_m_alpha_neg_pow_3d(x: &[f64], body: &ConvexBody, alpha: f64, tol: f64) -> Result<f64> {
    let ConvexBody::Ball { center, radius } = body else {
        return Err(HardyError::invalid("m_α in three dimensions is implemented for balls only"));
    };
    let s = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let slack = (radius - s) * (radius + s);
    let e = integrate_1d(
        |mu| ((s * s * mu * mu + slack).sqrt() - s * mu).powf(-alpha),
        0.0,
        1.0,
        Endpoints::REGULAR,
        tol / (4.0 * std::f64::consts::PI),
    )?;
    Ok(4.0 * std::f64::consts::PI * e.value)
}

/// The pseudo-distance `m_α(x)`; never exceeds `dist(x, ∂Ω)` on convex bodies.
pub fn m_alpha(x: &[f64], body: &ConvexBody, alpha: f64, config: &EngineConfig) -> Result<f64> {
    Ok(m_alpha_neg_pow(x, body, alpha, config)?.powf(-1.0 / alpha))
}

struct ConvexPairs<'a> {
    u: &'a TestFunction,
    body: &'a ConvexBody,
    p: f64,
}

impl McPairIntegrand for ConvexPairs<'_> {
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
        self.body.contains(y)
    }

    fn exit_distance(&self, x: &[f64], dir: &[f64]) -> f64 {
        self.body.ray(x, dir)
    }
}

/// Samples the support box of `u` and fails if `u` is nonzero outside `Ω`.
fn check_support(u: &TestFunction, body: &ConvexBody) -> Result<()> {
    let d = body.dim();
    if u.dim() != d {
        return Err(HardyError::invalid(format!(
            "test function is {}-dimensional but the body is {d}-dimensional",
            u.dim()
        )));
    }
    let (lo, hi) = u.support_box();
    let n: usize = if d == 1 { 1025 } else if d == 2 { 65 } else { 17 };
    let total = n.pow(d as u32);
    let mut x = vec![0.0; d];
    for idx in 0..total {
        let mut k = idx;
        for i in 0..d {
            let t = (k % n) as f64 / (n - 1) as f64;
            k /= n;
            x[i] = lo[i] + t * (hi[i] - lo[i]);
        }
        if u.eval(&x) != 0.0 && !body.contains(&x) {
            return Err(HardyError::domain(format!("{} is nonzero at {x:?}, outside the body", u.name())));
        }
    }
    Ok(())
}

fn support_cuts(u: &TestFunction) -> Vec<Vec<f64>> {
    let (lo, hi) = u.support_box();
    (0..u.dim())
        .map(|i| {
            let mut c = vec![lo[i], hi[i]];
            c.extend(u.breakpoints(i).iter().copied().filter(|t| *t > lo[i] && *t < hi[i]));
            c
        })
        .collect()
}

/// `∫_Ω |u|^p m_α^{-α}` (`use_m_alpha`) or `∫_Ω |u|^p dist(x, ∂Ω)^{-α}`.
pub fn convex_weighted_norm(
    u: &TestFunction,
    body: &ConvexBody,
    p: f64,
    alpha: f64,
    use_m_alpha: bool,
    config: &EngineConfig,
) -> Result<Estimate> {
    check_support(u, body)?;
    if let ConvexBody::Interval { a, b } = *body {
        // m_α coincides with the distance in one dimension
        return interval_weighted_norm(u, &[(a, b)], p, alpha, config);
    }
    let failure = std::sync::Mutex::new(None::<HardyError>);
    let weight = |x: &[f64]| -> f64 {
        let up = u.eval(x).abs().powf(p);
        if up == 0.0 || !body.contains(x) {
            return 0.0;
        }
        let w = if use_m_alpha {
            m_alpha_neg_pow(x, body, alpha, config)
        } else {
            body.dist_boundary(x).map(|t| t.powf(-alpha))
        };
        match w {
            Ok(w) => up * w,
            Err(e) => {
                *failure.lock().unwrap() = Some(e);
                f64::NAN
            }
        }
    };
    let est = tensor_gauss(weight, &support_cuts(u), config)?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(est)
}

/// `E_p^Ω[u]`: deterministic for intervals, Monte Carlo in `d ≥ 2`.
pub fn convex_form(u: &TestFunction, body: &ConvexBody, p: f64, alpha: f64, config: &EngineConfig) -> Result<Estimate> {
    check_support(u, body)?;
    HardyParams::new(body.dim(), p, alpha)?;
    match *body {
        ConvexBody::Interval { a, b } => form_1d(u, &[(a, b)], p, alpha, None, config),
        _ => double_singular_mc(&ConvexPairs { u, body, p }, alpha, &config.mc_settings()),
    }
}

/// Checks `E_p^Ω[u] ≥ κ_{d,p,α} ∫_Ω |u|^p m_α^{-α}` (or with `dist` in place
/// of `m_α`) on a convex body.
pub fn verify_convex(
    u: &TestFunction,
    body: &ConvexBody,
    p: f64,
    alpha: f64,
    use_m_alpha: bool,
    config: &EngineConfig,
) -> Result<HardyReport> {
    check_alpha(alpha)?;
    let params = HardyParams::new(body.dim(), p, alpha)?;
    let rhs = convex_weighted_norm(u, body, p, alpha, use_m_alpha, config)?;
    degenerate(u.name(), &rhs)?;
    let lhs = convex_form(u, body, p, alpha, config)?;
    HardyReport::new(u.name(), lhs, rhs, kappa(params.d, p, alpha)?)
}

/// `E_p^Ω[u]` in `d = 2` through the directional decomposition
/// `E = ∫_0^π dθ ∫_{ω^⊥} E^{1D}_{Ω∩ℓ}[u|_ℓ] dc`, where `ℓ = c ω^⊥ + R ω`:
/// each line carries the one-dimensional form of the restriction of `u`
/// to the chord it cuts from `Ω`. Angles and offsets use fixed
/// Gauss–Legendre rules with `n_theta` and `n_offset` nodes.
pub fn directional_form(
    u: &TestFunction,
    body: &ConvexBody,
    p: f64,
    alpha: f64,
    n_theta: usize,
    n_offset: usize,
    config: &EngineConfig,
) -> Result<Estimate> {
    if body.dim() != 2 || u.dim() != 2 {
        return Err(HardyError::invalid("directional decomposition is implemented for d = 2"));
    }
    check_support(u, body)?;
    let (lo, hi) = u.support_box();
    let corners = [[lo[0], lo[1]], [hi[0], lo[1]], [lo[0], hi[1]], [hi[0], hi[1]]];
    let theta_rule = gauss_legendre(n_theta);
    let offset_rule = gauss_legendre(n_offset);
    let mut total = Estimate::zero();
    for (theta, wt) in theta_rule.mapped(0.0, std::f64::consts::PI) {
        let omega = [theta.cos(), theta.sin()];
        let perp = [-omega[1], omega[0]];
        let proj = |c: &[f64; 2], v: &[f64; 2]| c[0] * v[0] + c[1] * v[1];
        let cmin = corners.iter().map(|c| proj(c, &perp)).fold(f64::INFINITY, f64::min);
        let cmax = corners.iter().map(|c| proj(c, &perp)).fold(f64::NEG_INFINITY, f64::max);
        let smin = corners.iter().map(|c| proj(c, &omega)).fold(f64::INFINITY, f64::min);
        let smax = corners.iter().map(|c| proj(c, &omega)).fold(f64::NEG_INFINITY, f64::max);
        for (c, wc) in offset_rule.mapped(cmin, cmax) {
            let q = [c * perp[0], c * perp[1]];
            let Some((s0, s1)) = body.chord(&q, &omega) else { continue };
            let (a, b) = (smin.max(s0), smax.min(s1));
            if !(a < b) {
                continue;
            }
            let uu = u.clone();
            let line = TestFunction::user(
                format!("{}|line", u.name()),
                vec![a],
                vec![b],
                vec![Vec::new()],
                move |t: &[f64]| uu.eval(&[q[0] + t[0] * omega[0], q[1] + t[0] * omega[1]]),
            )?;
            let e = match form_1d(&line, &[(s0, s1)], p, alpha, None, config) {
                Ok(e) => e,
                Err(HardyError::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            };
            total = total.combine(&e.scale(wt * wc));
        }
    }
    Ok(total)
}
