use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::quadrature::{Estimate, EstimateKind};

/// Right-hand sides below this are rejected instead of producing huge ratios.
pub const DEGENERATE_RHS: f64 = 1e-14;

/// Monte Carlo standard errors enter the tolerance with this many sigmas.
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of checking `lhs ≥ constant · rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub name: String,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub constant: f64,
    pub ratio: f64,
    /// First-order propagation of both error fields into the ratio.
    pub ratio_error: f64,
    pub margin: f64,
    /// Combined tolerance on the margin; the verdict is `Pass` iff
    /// `margin ≥ -tolerance`.
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn weight(e: &Estimate) -> f64 {
    match e.kind {
        EstimateKind::Deterministic => e.error,
        EstimateKind::MonteCarlo => MC_SIGMAS * e.error,
    }
}

impl HardyReport {
    pub fn new(name: impl Into<String>, lhs: Estimate, rhs: Estimate, constant: f64) -> Result<Self> {
        if !(rhs.value.abs() >= DEGENERATE_RHS) {
            return Err(HardyError::Degenerate(format!(
                "weighted norm {} is below {DEGENERATE_RHS:e}; the ratio is meaningless",
                rhs.value
            )));
        }
        let ratio = lhs.value / rhs.value;
        let ratio_error = lhs.error / rhs.value.abs() + ratio.abs() * rhs.error / rhs.value.abs();
        let margin = lhs.value - constant * rhs.value;
        let tolerance = weight(&lhs) + constant.abs() * weight(&rhs);
        let verdict = if margin >= -tolerance { Verdict::Pass } else { Verdict::Fail };
        Ok(Self {
            name: name.into(),
            lhs,
            rhs,
            constant,
            ratio,
            ratio_error,
            margin,
            tolerance,
            verdict,
        })
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
