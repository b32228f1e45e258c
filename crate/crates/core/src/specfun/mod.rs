//! Special functions and the closed-form constants of the Hardy problem.

mod constants;
mod gamma;
mod params;

pub use constants::{
    a_const, angular_factor, beta_c, gamma_ab_closed, gamma_ab_quad, kappa, kappa_bd,
    symmetric_power_difference, weight_profile, weight_profile_at_optimum,
};
pub use gamma::{gamma, gamma_pair, ln_gamma, reciprocal_gamma, sin_pi, GammaPair};
pub use params::HardyParams;
