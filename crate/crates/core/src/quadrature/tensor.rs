use super::gauss::{gauss_legendre, GaussRule};
use super::{EngineConfig, Estimate};
use crate::error::{HardyError, Result};
use crate::parallel::{pairwise_sum, par_map};

const FINE: usize = 16;
const COARSE: usize = 10;

fn axis_nodes(cuts: &[f64], rule: &GaussRule) -> Vec<(f64, f64)> {
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>())
        .collect()
}

fn grid_sum(f: &(impl Fn(&[f64]) -> f64 + Sync), axes: &[Vec<(f64, f64)>], config: &EngineConfig) -> f64 {
    let d = axes.len();
    let rows = par_map(config.parallelism, &axes[0], |&(x0, w0)| {
        let mut terms = Vec::new();
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0; d];
        x[0] = x0;
        if d == 1 {
            return w0 * f(&x);
        }
        loop {
            let mut w = w0;
            for k in 1..d {
                let (xk, wk) = axes[k][idx[k]];
                x[k] = xk;
                w *= wk;
            }
            terms.push(w * f(&x));
            // odometer over axes 1..d
            let mut k = d - 1;
            loop {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
                if k == 1 {
                    return pairwise_sum(&terms);
                }
                k -= 1;
            }
        }
    });
    pairwise_sum(&rows)
}

/// Tensor-product Gauss–Legendre over a box, each axis cut at the given
/// points (which must include both ends). The error is the difference
/// between 16- and 10-point panels.
pub fn tensor_gauss(
    f: impl Fn(&[f64]) -> f64 + Sync,
    cuts: &[Vec<f64>],
    config: &EngineConfig,
) -> Result<Estimate> {
    if cuts.is_empty() || cuts.len() > 3 || cuts.iter().any(|c| c.len() < 2) {
        return Err(HardyError::invalid("tensor rule needs 1 to 3 axes with at least two cuts each"));
    }
    let sorted: Vec<Vec<f64>> = cuts
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_by(f64::total_cmp);
            c.dedup();
            c
        })
        .collect();
    let fine_rule = gauss_legendre(FINE);
    let coarse_rule = gauss_legendre(COARSE);
    let fine: Vec<_> = sorted.iter().map(|c| axis_nodes(c, &fine_rule)).collect();
    let coarse: Vec<_> = sorted.iter().map(|c| axis_nodes(c, &coarse_rule)).collect();
    let vf = grid_sum(&f, &fine, config);
    let vc = grid_sum(&f, &coarse, config);
    let nodes = fine.iter().map(|a| a.len() as u64).product::<u64>()
        + coarse.iter().map(|a| a.len() as u64).product::<u64>();
    Ok(Estimate::deterministic(vf, (vf - vc).abs() + 1e-15 * vf.abs(), nodes))
}

/// Adds geometric cuts (ratio 4) between `lo > origin` and `hi`.
pub fn graded_cuts(lo: f64, hi: f64, origin: f64) -> Vec<f64> {
    let mut cuts = vec![lo];
    if lo > origin {
        let mut c = lo;
        while hi - origin > 4.0 * (c - origin) {
            c = origin + 4.0 * (c - origin);
            cuts.push(c);
        }
    }
    cuts.push(hi);
    cuts
}
