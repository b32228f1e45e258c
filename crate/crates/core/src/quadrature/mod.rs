//! Integration engines.
//!
//! Deterministic rules report an a-posteriori error bound (difference of two
//! resolutions plus modelled remainders); Monte Carlo reports the standard
//! error. Both carry the number of integrand evaluations.

mod adaptive;
mod diagonal;
mod gauss;
mod kernel;
mod montecarlo;
mod pv;
pub mod rng;
mod sphere;
mod tanh_sinh;
mod tensor;

use serde::{Deserialize, Serialize};

pub use adaptive::{
    integrate_1d, integrate_offsets, integrate_semi_infinite, integrate_with_breaks, Endpoints,
};
pub use diagonal::{double_singular_1d, DiagonalRule, PairGeometry};
pub use gauss::{gauss_legendre, GaussRule};
pub use kernel::TruncatedKernel;
pub use montecarlo::{double_singular_mc, McPairIntegrand, McSettings};
pub use pv::{pv_integral, PvDomain, SingularIntegrand};
pub use sphere::{sphere_quad, sphere_quad_with_breaks, sphere_trapezoid, unit_vector_2d};
pub use tanh_sinh::{Abscissa, TanhSinh};
pub use tensor::{graded_cuts, tensor_gauss};

use crate::parallel::Parallelism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Deterministic,
    MonteCarlo,
}

/// A numerical value with its error: an a-posteriori bound for
/// deterministic rules, a standard error for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub kind: EstimateKind,
    pub samples_or_nodes: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self::deterministic(value, 0.0, 0)
    }

    pub fn deterministic(value: f64, error: f64, nodes: u64) -> Self {
        Self {
            value,
            error: error.abs(),
            kind: EstimateKind::Deterministic,
            samples_or_nodes: nodes,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64, samples: u64) -> Self {
        Self {
            value,
            error: std_error.abs(),
            kind: EstimateKind::MonteCarlo,
            samples_or_nodes: samples,
        }
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    /// Sum of two estimates. Deterministic bounds add; standard errors add
    /// in quadrature; a mixed sum is reported as Monte Carlo with the
    /// deterministic bound folded in linearly.
    pub fn combine(&self, other: &Estimate) -> Estimate {
        use EstimateKind::*;
        let (kind, error) = match (self.kind, other.kind) {
            (Deterministic, Deterministic) => (Deterministic, self.error + other.error),
            (MonteCarlo, MonteCarlo) => (MonteCarlo, self.error.hypot(other.error)),
            _ => (MonteCarlo, self.error + other.error),
        };
        Estimate {
            value: self.value + other.value,
            error,
            kind,
            samples_or_nodes: self.samples_or_nodes + other.samples_or_nodes,
        }
    }

    pub fn scale(&self, factor: f64) -> Estimate {
        Estimate {
            value: self.value * factor,
            error: self.error * factor.abs(),
            ..*self
        }
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Estimate>) -> Estimate {
        items
            .into_iter()
            .fold(Estimate::zero(), |acc, e| acc.combine(e))
    }
}

/// Settings shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Target absolute tolerance of adaptive 1-D rules.
    pub tol: f64,
    /// Monte Carlo sample budget.
    pub samples: u64,
    /// Monte Carlo strata over the radial variable.
    pub strata: u32,
    /// Seed of the counter-based generator.
    pub seed: u64,
    /// Resolution of the diagonal-singular double integrals.
    pub diagonal: DiagonalRule,
    pub parallelism: Parallelism,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            samples: 1_000_000,
            strata: 32,
            seed: 0x5eed_0f_4a4d,
            diagonal: DiagonalRule::default(),
            parallelism: Parallelism::default(),
        }
    }
}

impl EngineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallelism = Parallelism::Sequential;
        self
    }

    pub fn mc_settings(&self) -> McSettings {
        McSettings {
            samples: self.samples,
            strata: self.strata,
            seed: self.seed,
            parallelism: self.parallelism,
        }
    }
}
