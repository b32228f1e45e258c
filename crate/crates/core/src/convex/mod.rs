//! General domains: directional distances and the pseudo-distance `m_α`,
//! the Hardy potential of a power weight, and verification of the Hardy
//! inequality on unions of intervals and on convex bodies.

mod body;
mod potential;
mod verify;

pub use body::ConvexBody;
pub use potential::{potential_v, PotentialSpec};
pub use verify::{
    check_alpha, convex_form, convex_weighted_norm, directional_form, interval_weighted_norm, m_alpha,
    m_alpha_neg_pow, verify_convex, verify_interval,
};
