//! Ordered data-parallel map used by every engine.
//!
//! `par_map` always returns results in input order, and callers reduce the
//! returned vector sequentially (see [`pairwise_sum`]), so the numerical
//! output never depends on scheduling or on whether rayon is compiled in.

use serde::{Deserialize, Serialize};

/// Execution mode selected at runtime. Without the `parallel` feature
/// `Rayon` silently degrades to sequential execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Parallelism {
    Sequential,
    #[default]
    Rayon,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Rayon
    }
}

#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Parallelism::Rayon => items.par_iter().map(f).collect(),
        Parallelism::Sequential => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(_mode: Parallelism, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Pairwise (cascade) summation with a fixed tree shape.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Caps the global rayon pool. Returns false when the pool was already built
/// or when rayon is not compiled in.
pub fn init_threads(threads: Option<usize>) -> bool {
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = threads {
            return rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global()
                .is_ok();
        }
        false
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order_in_both_modes() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = par_map(Parallelism::Rayon, &xs, |x| x * x);
        let b = par_map(Parallelism::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 999 * 999);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
