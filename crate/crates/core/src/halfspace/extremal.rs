//! Near-optimizers `u_n = v_n^{2/p} x_d^β`, `β = (α-1)/p`, of the half-space
//! inequality.
//!
//! `v_n(x) = φ_n(x_d) ψ_n(x')` with
//!
//! * `α ≥ 1`: `φ_n = 1` on `[1/n, 1]`, `log(2n t)/log 2` on `[1/(2n), 1/n]`,
//!   `2 - t` on `[1, 2]`; `ψ_n = 1` on `[-n², n²]^{d-1}`, decaying linearly
//!   to 0 over a margin of width 1.
//! * `α < 1`: `φ_n = 1` on `[1, n]`, `2t - 1` on `[1/2, 1]`,
//!   `log(2n/t)/log 2` on `[n, 2n]`; `ψ_n` with margin `n`.
//!
//! Every ramp satisfies `|∇v_n| ≤ 2/x_d`.

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use super::testfn::{FunctionKind, TestFunction};
use crate::error::{HardyError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    AlphaGe1,
    AlphaLt1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub n: u32,
    pub regime: Regime,
    pub p: f64,
    pub alpha: f64,
    pub d: usize,
}

impl ExtremalSpec {
    pub fn new(n: u32, p: f64, alpha: f64, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(HardyError::invalid(format!("extremal index n must be ≥ 2, got {n}")));
        }
        if !(p > 1.0 && p.is_finite()) || !(alpha > 0.0 && alpha < 2.0) || !(1..=3).contains(&d) {
            return Err(HardyError::invalid("extremal spec needs p > 1, α ∈ (0,2), d ∈ {1,2,3}"));
        }
        let regime = if alpha >= 1.0 { Regime::AlphaGe1 } else { Regime::AlphaLt1 };
        Ok(Self { n, regime, p, alpha, d })
    }

    pub fn beta(&self) -> f64 {
        (self.alpha - 1.0) / self.p
    }

    /// `φ_n(t)` along the normal direction.
    pub fn normal_profile(&self, t: f64) -> f64 {
        let n = f64::from(self.n);
        match self.regime {
            Regime::AlphaGe1 => {
                if t <= 0.5 / n || t >= 2.0 {
                    0.0
                } else if t < 1.0 / n {
                    (2.0 * n * t).ln() / LN_2
                } else if t <= 1.0 {
                    1.0
                } else {
                    2.0 - t
                }
            }
            Regime::AlphaLt1 => {
                if t <= 0.5 || t >= 2.0 * n {
                    0.0
                } else if t < 1.0 {
                    2.0 * t - 1.0
                } else if t <= n {
                    1.0
                } else {
                    (2.0 * n / t).ln() / LN_2
                }
            }
        }
    }

    /// `(plateau half-width, margin)` of the tangential cutoff.
    fn tangential(&self) -> (f64, f64) {
        let n = f64::from(self.n);
        match self.regime {
            Regime::AlphaGe1 => (n * n, 1.0),
            Regime::AlphaLt1 => (n * n, n),
        }
    }

    pub fn tangential_profile(&self, s: f64) -> f64 {
        let (w, m) = self.tangential();
        ((w + m - s.abs()) / m).clamp(0.0, 1.0)
    }

    /// `v_n(x)`.
    pub fn v(&self, x: &[f64]) -> f64 {
        let d = x.len() - 1;
        let tangential: f64 = x[..d].iter().map(|&s| self.tangential_profile(s)).product();
        tangential * self.normal_profile(x[d])
    }

    /// Kinks of `φ_n`, including the support ends.
    pub fn normal_breaks(&self) -> [f64; 4] {
        let n = f64::from(self.n);
        match self.regime {
            Regime::AlphaGe1 => [0.5 / n, 1.0 / n, 1.0, 2.0],
            Regime::AlphaLt1 => [0.5, 1.0, n, 2.0 * n],
        }
    }
}

/// `u_n = v_n^{2/p} x_d^β`.
pub fn extremal_u(spec: &ExtremalSpec) -> Result<TestFunction> {
    let s = *spec;
    let nb = s.normal_breaks();
    let (w, m) = s.tangential();
    let mut lo = vec![-(w + m); s.d - 1];
    let mut hi = vec![w + m; s.d - 1];
    lo.push(nb[0]);
    hi.push(nb[3]);
    let mut breaks: Vec<Vec<f64>> = vec![vec![-w, w]; s.d - 1];
    breaks.push(nb.to_vec());
    let beta = s.beta();
    let exponent = 2.0 / s.p;
    let u = TestFunction::user(format!("extremal[n={}]", s.n), lo, hi, breaks, move |x: &[f64]| {
        let v = s.v(x);
        if v <= 0.0 {
            0.0
        } else {
            v.powf(exponent) * x[x.len() - 1].powf(beta)
        }
    })?;
    Ok(u.with_kind(FunctionKind::Extremal))
}
