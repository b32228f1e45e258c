use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

/// `1{|x-y| > ε} |x-y|^{-d-α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedKernel {
    pub epsilon: f64,
    pub d: usize,
    pub alpha: f64,
}

impl TruncatedKernel {
    pub fn new(epsilon: f64, d: usize, alpha: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || d == 0 || !(alpha > 0.0 && alpha < 2.0) {
            return Err(HardyError::invalid(format!(
                "kernel needs ε ≥ 0, d ≥ 1, α ∈ (0,2); got ε = {epsilon}, d = {d}, α = {alpha}"
            )));
        }
        Ok(Self { epsilon, d, alpha })
    }

    pub fn exponent(&self) -> f64 {
        self.d as f64 + self.alpha
    }

    /// Kernel as a function of the distance `r = |x - y|`.
    pub fn radial(&self, r: f64) -> f64 {
        if r > self.epsilon {
            r.powf(-self.exponent())
        } else {
            0.0
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        self.radial(r2.sqrt())
    }

    /// Mass of the d = 1 kernel outside `(-r, r)`: `2 max(r, ε)^{-α} / α`.
    pub fn tail_mass_1d(&self, r: f64) -> f64 {
        2.0 * r.max(self.epsilon).powf(-self.alpha) / self.alpha
    }
}
