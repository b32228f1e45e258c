use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

/// The triple `(d, p, α)` with `1 < p < ∞`, `0 < α < 2`, `d ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyParams {
    pub d: usize,
    pub p: f64,
    pub alpha: f64,
}

impl HardyParams {
    pub fn new(d: usize, p: f64, alpha: f64) -> Result<Self> {
        if d == 0 {
            return Err(HardyError::invalid("dimension d must be at least 1"));
        }
        if !(p.is_finite() && p > 1.0) {
            return Err(HardyError::invalid(format!("p must lie in (1, ∞), got {p}")));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(HardyError::invalid(format!(
                "alpha must lie in (0, 2), got {alpha}"
            )));
        }
        Ok(Self { d, p, alpha })
    }

    /// Conjugate exponent `p' = p/(p-1)`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Hardy-optimal weight exponent `β = (α-1)/p`.
    pub fn beta(&self) -> f64 {
        (self.alpha - 1.0) / self.p
    }

    /// `β' = (p-1)(α-1)/p`; note `β + β' = α - 1`.
    pub fn beta_conj(&self) -> f64 {
        (self.p - 1.0) * (self.alpha - 1.0) / self.p
    }

    /// Same `d` and `α` with `p` replaced by `p'`.
    pub fn conj(&self) -> Self {
        Self {
            d: self.d,
            p: self.p_conj(),
            alpha: self.alpha,
        }
    }
}
