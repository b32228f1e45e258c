//! Sharp fractional Hardy inequalities for Sobolev-Bregman forms.
//!
//! The crate computes the sharp constants `κ_{d,p,α}` for the half-space
//! inequality and certifies the inequality numerically, together with the
//! identities behind it:
//!
//! * [`specfun`]: Γ with sign/log representation, Euler beta with negative
//!   arguments, the integral `γ(a, b)` and every closed-form constant.
//! * [`bregman`]: signed powers and the Bregman divergence `F_p`.
//! * [`quadrature`]: the integration engines (endpoint-singular 1-D rules,
//!   principal values, diagonal-singular double integrals, sphere rules and
//!   stratified Monte Carlo).
//! * [`halfspace`]: the form `E_p[u]` on `{x_d > 0}`, the ground-state and
//!   decomposition checks, and the extremal sharpness sweep.
//! * [`convex`]: directional distances, the pseudo-distance `m_α`, the Hardy
//!   potential and interval / convex-domain verification.
//!
//! Inner loops run on rayon when the `parallel` feature is enabled (the
//! default). Every reduction is performed in a fixed order so results are
//! bit-identical with and without it.

pub mod battery;
pub mod bregman;
pub mod convex;
pub mod error;
pub mod halfspace;
pub mod parallel;
pub mod quadrature;
pub mod specfun;

pub use error::{HardyError, Result};
pub use quadrature::{EngineConfig, Estimate, EstimateKind};
pub use specfun::HardyParams;
