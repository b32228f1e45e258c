//! The half-space `D = {x_d > 0}`: the Sobolev-Bregman form, the weighted
//! norm `∫ |u|^p x_d^{-α}`, the ground-state and decomposition identities for
//! power weights, and the extremal sweep showing that `κ_{d,p,α}` is sharp.

mod extremal;
pub(crate) mod form;
mod report;
mod testfn;

use serde::{Deserialize, Serialize};

pub use extremal::{extremal_u, ExtremalSpec, Regime};
pub use report::{HardyReport, Verdict, DEGENERATE_RHS, MC_SIGMAS};
pub use testfn::{FunctionKind, TestFunction};

use crate::bregman::bregman_f;
use crate::error::{HardyError, Result};
use crate::parallel::par_map;
use crate::quadrature::{
    double_singular_1d, double_singular_mc, graded_cuts, pv_integral, tensor_gauss, EngineConfig,
    Estimate, PairGeometry, PvDomain, SingularIntegrand,
};
use crate::specfun::{
    angular_factor, gamma_ab_closed, gamma_ab_quad, kappa, symmetric_power_difference, HardyParams,
};
use form::{form_1d, power_gap_kernel, segment_integral, HalfspacePairs};

/// Power weight `w_β(x) = x_d^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub beta: f64,
}

impl WeightProfile {
    pub fn eval(&self, x: &[f64]) -> f64 {
        x[x.len() - 1].powf(self.beta)
    }

    /// Range of `β` for which the decomposition of `E_p` holds:
    /// `(-1, α)` for `p < 2`, `(-1/(p-1), α/(p-1))` for `p ≥ 2`.
    pub fn admissible_range(p: f64, alpha: f64) -> (f64, f64) {
        if p < 2.0 {
            (-1.0, alpha)
        } else {
            (-1.0 / (p - 1.0), alpha / (p - 1.0))
        }
    }

    pub fn is_admissible(&self, p: f64, alpha: f64) -> bool {
        let (lo, hi) = Self::admissible_range(p, alpha);
        self.beta > lo && self.beta < hi
    }
}

fn check_support(u: &TestFunction, params: &HardyParams) -> Result<()> {
    if u.dim() != params.d {
        return Err(HardyError::invalid(format!(
            "test function is {}-dimensional but d = {}",
            u.dim(),
            params.d
        )));
    }
    let (lo, _) = u.support_box();
    if !(lo[params.d - 1] > 0.0) {
        return Err(HardyError::domain(format!(
            "support of {} must stay in x_d > 0",
            u.name()
        )));
    }
    Ok(())
}

const HALF_LINE: [(f64, f64); 1] = [(0.0, f64::INFINITY)];

/// `E_p[u] = (1/2) ∬_{D×D} (u(x)-u(y))(u(x)^{⟨p-1⟩}-u(y)^{⟨p-1⟩}) |x-y|^{-d-α}`.
///
/// Deterministic in `d = 1`, stratified Monte Carlo in `d ≥ 2`.
pub fn form_ep(u: &TestFunction, params: &HardyParams, config: &EngineConfig) -> Result<Estimate> {
    check_support(u, params)?;
    if params.d == 1 {
        form_1d(u, &HALF_LINE, params.p, params.alpha, Some(0.0), config)
    } else {
        double_singular_mc(&HalfspacePairs { u, p: params.p }, params.alpha, &config.mc_settings())
    }
}

/// `∫_D |u|^p x_d^{-α} dx`.
pub fn weighted_norm(u: &TestFunction, p: f64, alpha: f64, config: &EngineConfig) -> Result<Estimate> {
    let d = u.dim();
    let (lo, hi) = u.support_box();
    if !(lo[d - 1] > 0.0) {
        return Err(HardyError::domain("support must stay in x_d > 0"));
    }
    if d == 1 {
        return segment_integral(u, &[], Some(0.0), config.tol, |pt| {
            u.eval1(pt.x).abs().powf(p) * pt.x.powf(-alpha)
        });
    }
    let mut cuts: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut c = vec![lo[i], hi[i]];
        c.extend_from_slice(u.breakpoints(i));
        if i == d - 1 {
            let mut graded = Vec::new();
            c.sort_by(f64::total_cmp);
            for w in c.windows(2) {
                graded.extend(graded_cuts(w[0], w[1], 0.0));
            }
            c = graded;
        }
        cuts.push(c);
    }
    tensor_gauss(|x| u.eval(x).abs().powf(p) * x[d - 1].powf(-alpha), &cuts, config)
}

/// Checks `E_p[u] ≥ κ_{d,p,α} ∫ |u|^p x_d^{-α}`.
pub fn verify_halfspace(u: &TestFunction, params: &HardyParams, config: &EngineConfig) -> Result<HardyReport> {
    let rhs = weighted_norm(u, params.p, params.alpha, config)?;
    if !(rhs.value.abs() >= DEGENERATE_RHS) {
        return Err(HardyError::Degenerate(format!(
            "{}: weighted norm {} vanishes",
            u.name(),
            rhs.value
        )));
    }
    let lhs = form_ep(u, params, config)?;
    let k = kappa(params.d, params.p, params.alpha)?;
    HardyReport::new(u.name(), lhs, rhs, k)
}

/// `γ(a, b)`, by the closed form except at `a = 1`.
pub fn gamma_ab(a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == 1.0 {
        Ok(gamma_ab_quad(a, b, tol)?.value)
    } else {
        gamma_ab_closed(a, b)
    }
}

struct GroundState {
    beta: f64,
    alpha: f64,
    x: f64,
}

impl SingularIntegrand for GroundState {
    fn eval(&self, y: f64) -> f64 {
        (y.powf(self.beta) - self.x.powf(self.beta)) * (y - self.x).abs().powf(-1.0 - self.alpha)
    }

    fn paired(&self, x0: f64, h: f64) -> f64 {
        x0.powf(self.beta) * symmetric_power_difference(self.beta, h / x0) * h.powf(-1.0 - self.alpha)
    }

    fn stable_pairing(&self) -> bool {
        true
    }
}

/// Relative residual of `P.V.∫_0^∞ (y^β - x^β)|x-y|^{-1-α} dy = γ(α,β) x^{β-α}`.
pub fn ground_state_residual(beta: f64, alpha: f64, x: f64, config: &EngineConfig) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || !(beta > -1.0 && beta < alpha) || !(x > 0.0) {
        return Err(HardyError::domain(format!(
            "ground state needs α ∈ (0,2), β ∈ (-1, α), x > 0; got α = {alpha}, β = {beta}, x = {x}"
        )));
    }
    // The tail beyond 2x decays like y^{β-α-1}, too slowly for any mapped
    // rule when β is close to α; with t = x/y it is
    // x^{β-α} (B_{1/2}(α-β, -α) - B_{1/2}(α, -α)).
    let near = pv_integral(&GroundState { beta, alpha, x }, PvDomain::Interval(0.0, 2.0 * x), x, config.tol)?;
    let far = x.powf(beta - alpha) * (incomplete_beta_half(alpha - beta, alpha) - incomplete_beta_half(alpha, alpha));
    let target = gamma_ab(alpha, beta, config.tol)? * x.powf(beta - alpha);
    Ok((near.value + far - target).abs() / (1.0 + target.abs()))
}

/// `∫_0^{1/2} t^{a-1} (1-t)^{-1-α} dt` for `a > 0`, from the binomial series
/// of `(1-t)^{-1-α}` (terms shrink like `2^{-n}`).
fn incomplete_beta_half(a: f64, alpha: f64) -> f64 {
    let mut coeff = 1.0;
    let mut zn = 0.5f64.powf(a);
    let mut sum = 0.0;
    for n in 0..200 {
        let term = coeff * zn / (a + n as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        coeff *= (1.0 + alpha + n as f64) / (n as f64 + 1.0);
        zn *= 0.5;
    }
    sum
}

/// Both sides of the decomposition
/// `E_p[u] = c_β ∫|u|^p x^{-α} + (1/p) ∬ F_p(u/w(x), u/w(y)) w(x)^{p-1} w(y) k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub beta: f64,
    pub lhs: Estimate,
    /// `c_β = -A ((p-1)γ(α,β) + γ(α,(p-1)β)) / p`, `A` the angular factor.
    pub constant: f64,
    pub weighted_norm: Estimate,
    /// The Bregman double integral (without the `1/p`).
    pub remainder: Estimate,
    pub rhs: f64,
    pub relative_gap: f64,
    /// Combined error of both sides, relative to `|lhs|`.
    pub relative_tolerance: f64,
}

/// `c_β` of the decomposition.
pub fn decomposition_constant(params: &HardyParams, beta: f64, tol: f64) -> Result<f64> {
    let p = params.p;
    let a = angular_factor(params.d, params.alpha)?;
    let g1 = gamma_ab(params.alpha, beta, tol)?;
    let g2 = gamma_ab(params.alpha, (p - 1.0) * beta, tol)?;
    Ok(-a * ((p - 1.0) * g1 + g2) / p)
}

/// Evaluates both sides of the decomposition for `d = 1`.
pub fn decomposition_residual(
    u: &TestFunction,
    params: &HardyParams,
    beta: f64,
    config: &EngineConfig,
) -> Result<DecompositionCheck> {
    check_support(u, params)?;
    if params.d != 1 {
        return Err(HardyError::invalid("the decomposition check is implemented for d = 1"));
    }
    let w = WeightProfile { beta };
    if !w.is_admissible(params.p, params.alpha) {
        let (lo, hi) = WeightProfile::admissible_range(params.p, params.alpha);
        return Err(HardyError::domain(format!("β = {beta} outside the admissible range ({lo}, {hi})")));
    }
    let (p, alpha) = (params.p, params.alpha);
    let lhs = form_ep(u, params, config)?;
    let norm = weighted_norm(u, p, alpha, config)?;
    let constant = decomposition_constant(params, beta, config.tol)?;

    let a = |x: f64| u.eval1(x) * x.powf(-beta);
    let psi = |x: f64, y: f64| {
        let (ax, ay) = (a(x), a(y));
        let (wx, wy) = (x.powf(beta), y.powf(beta));
        bregman_f(p, ax, ay) * wx.powf(p - 1.0) * wy + bregman_f(p, ay, ax) * wy.powf(p - 1.0) * wx
    };
    let segs = u.segments().to_vec();
    let geometry = PairGeometry::new(segs.clone())?
        .with_breakpoints(u.line_points())
        .graded_toward(0.0);
    let inner = double_singular_1d(&psi, &geometry, 1.0 + alpha, 2.0, config)?.scale(0.5);
    let gaps = form::gaps(&HALF_LINE, &segs)?;
    let inner_tol = 1e-13;
    let failure = std::cell::Cell::new(None);
    let outer = segment_integral(u, &[], Some(0.0), config.tol, |pt| {
        let up = u.eval1(pt.x).abs().powf(p);
        if up == 0.0 {
            return 0.0;
        }
        let seg = segs[pt.seg];
        let mut k1 = 0.0;
        let mut kp = 0.0;
        for &g in &gaps {
            match (
                power_gap_kernel(&pt, seg, g, beta, alpha, inner_tol),
                power_gap_kernel(&pt, seg, g, (p - 1.0) * beta, alpha, inner_tol),
            ) {
                (Ok(v1), Ok(vp)) => {
                    k1 += v1;
                    kp += vp;
                }
                (Err(e), _) | (_, Err(e)) => {
                    failure.set(Some(e));
                    return 0.0;
                }
            }
        }
        let wx = pt.x.powf(beta);
        up * ((p - 1.0) * k1 / wx + kp * wx.powf(1.0 - p))
    })?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let remainder = inner.combine(&outer);
    let rhs = constant * norm.value + remainder.value / p;
    let scale = lhs.value.abs().max(f64::MIN_POSITIVE);
    let relative_gap = (lhs.value - rhs).abs() / scale;
    let relative_tolerance = (lhs.error + constant.abs() * norm.error + remainder.error / p) / scale;
    Ok(DecompositionCheck {
        beta,
        lhs,
        constant,
        weighted_norm: norm,
        remainder,
        rhs,
        relative_gap,
        relative_tolerance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u32,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub ratio: f64,
    pub ratio_error: f64,
    /// `ratio - κ_{d,p,α}`.
    pub gap: f64,
    pub gap_log_n: f64,
}

/// Hardy ratios of the extremal sequence `u_n` for each `n` in `n_list`.
pub fn extremal_sweep(
    p: f64,
    alpha: f64,
    d: usize,
    n_list: &[u32],
    config: &EngineConfig,
) -> Result<Vec<SweepRow>> {
    if n_list.is_empty() {
        return Err(HardyError::invalid("extremal sweep needs at least one n"));
    }
    let params = HardyParams::new(d, p, alpha)?;
    let k = kappa(d, p, alpha)?;
    let rows = par_map(config.parallelism, n_list, |&n| -> Result<SweepRow> {
        let spec = ExtremalSpec::new(n, p, alpha, d)?;
        let u = extremal_u(&spec)?;
        let report = verify_halfspace(&u, &params, config)?;
        let gap = report.ratio - k;
        Ok(SweepRow {
            n,
            lhs: report.lhs,
            rhs: report.rhs,
            ratio: report.ratio,
            ratio_error: report.ratio_error,
            gap,
            gap_log_n: gap * f64::from(n).ln(),
        })
    });
    rows.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_ranges() {
        assert_eq!(WeightProfile::admissible_range(1.5, 0.5), (-1.0, 0.5));
        assert_eq!(WeightProfile::admissible_range(3.0, 1.5), (-0.5, 0.75));
        assert!(WeightProfile { beta: 0.0 }.is_admissible(3.0, 1.5));
        assert_eq!(WeightProfile { beta: 0.0 }.eval(&[2.0, 5.0]), 1.0);
    }

    #[test]
    fn optimal_beta_gives_kappa() {
        for (p, alpha) in [(1.5, 0.5), (2.0, 1.5), (3.0, 1.25), (5.0, 0.3)] {
            let params = HardyParams::new(2, p, alpha).unwrap();
            let c = decomposition_constant(&params, params.beta(), 1e-12).unwrap();
            let k = kappa(2, p, alpha).unwrap();
            assert!((c - k).abs() <= 1e-12 * (1.0 + k.abs()), "{c} vs {k}");
        }
    }
}
