//! Seeded families of test functions used by the verification suites and
//! the command line.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::convex::ConvexBody;
use crate::error::{HardyError, Result};
use crate::halfspace::TestFunction;
use crate::quadrature::rng;

/// Battery stream ids, so that families drawn with one seed never share
/// random numbers.
const HALFSPACE_STREAM: u64 = 0x4841_4c46;
const INTERVAL_STREAM: u64 = 0x494e_5456;

fn random_piece(rng: &mut ChaCha8Rng, lo: f64, hi: f64, idx: usize) -> Result<TestFunction> {
    let w = hi - lo;
    let a = lo + w * rng.random_range(0.0..0.6);
    let b = a + (hi - a) * rng.random_range(0.25..1.0);
    if idx % 2 == 0 {
        let m = a + (b - a) * rng.random_range(0.15..0.85);
        TestFunction::hat(a, m, b)
    } else {
        TestFunction::bump(a, b)
    }
}

/// `count` functions on the half-line, supported in `[0.01, 4]`: hats,
/// bumps, products of the two, two-piece disjoint sums and signed sums,
/// plus a few supports hugging the boundary point `0`.
pub fn halfspace_battery(count: usize, seed: u64) -> Result<Vec<TestFunction>> {
    let mut rng = rng::stream(seed, HALFSPACE_STREAM);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let u = match i % 6 {
            0 => random_piece(&mut rng, 0.01, 4.0, 0)?,
            1 => random_piece(&mut rng, 0.01, 4.0, 1)?,
            2 => {
                let h = random_piece(&mut rng, 0.05, 3.0, 0)?;
                let (lo, hi) = (h.support_box().0[0], h.support_box().1[0]);
                let shift = rng.random_range(-0.3..0.3) * (hi - lo);
                let b = TestFunction::bump(lo + shift.max(0.0), hi + shift.min(0.0))?;
                h.times(&b)?
            }
            3 => {
                let cut = rng.random_range(0.5..2.0);
                let left = random_piece(&mut rng, 0.01, cut, 0)?;
                let right = random_piece(&mut rng, cut + 0.1, 4.0, 1)?;
                TestFunction::disjoint_sum(&[left, right])?
            }
            4 => {
                let cut = rng.random_range(0.5..2.0);
                let left = random_piece(&mut rng, 0.01, cut, 1)?;
                let right = random_piece(&mut rng, cut + 0.1, 4.0, 0)?.scaled(-rng.random_range(0.3..1.5));
                TestFunction::disjoint_sum(&[left, right])?
            }
            _ => {
                // supports reaching close to the boundary
                let a = 10f64.powf(rng.random_range(-3.0..-1.0));
                let b = a + rng.random_range(0.2..2.0);
                let m = a + (b - a) * rng.random_range(0.1..0.5);
                TestFunction::hat(a, m, b)?
            }
        };
        let name = format!("h{i:02}:{}", u.name());
        out.push(u.with_name(name));
    }
    Ok(out)
}

/// `count` tensor products in `{x_d > 0}`, `d ≥ 2`: hats and bumps across
/// the tangential axes times a half-line profile in `x_d`.
pub fn halfspace_battery_nd(count: usize, d: usize, seed: u64) -> Result<Vec<TestFunction>> {
    if d < 2 {
        return Err(HardyError::invalid("use halfspace_battery for d = 1"));
    }
    let mut rng = rng::stream(seed, HALFSPACE_STREAM ^ d as u64);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut factors = Vec::with_capacity(d);
        for k in 0..d - 1 {
            factors.push(random_piece(&mut rng, -1.0, 1.0, i + k)?);
        }
        factors.push(random_piece(&mut rng, 0.02, 3.0, i + 1)?);
        let u = TestFunction::product(&factors)?;
        let name = format!("h{d}d{i:02}:{}", u.name());
        out.push(u.with_name(name));
    }
    Ok(out)
}

/// `count` functions compactly supported in the union of the disjoint
/// intervals `j`; every function touches every component.
pub fn interval_battery(count: usize, j: &[(f64, f64)], seed: u64) -> Result<Vec<TestFunction>> {
    if j.is_empty() {
        return Err(HardyError::invalid("interval battery needs at least one component"));
    }
    let mut rng = rng::stream(seed, INTERVAL_STREAM);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut parts = Vec::with_capacity(j.len());
        for (k, &(c0, c1)) in j.iter().enumerate() {
            let margin = 1e-3 * (c1 - c0);
            let mut piece = if i % 4 == 3 {
                // symmetric about the midpoint
                let r = 0.5 * (c1 - c0) * rng.random_range(0.5..0.99);
                let c = 0.5 * (c0 + c1);
                TestFunction::bump(c - r, c + r)?
            } else {
                random_piece(&mut rng, c0 + margin, c1 - margin, i + k)?
            };
            if k % 2 == 1 && i % 3 == 1 {
                piece = piece.scaled(-1.0);
            }
            parts.push(piece);
        }
        let u = if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            TestFunction::disjoint_sum(&parts)?
        };
        let name = format!("j{i:02}:{}", u.name());
        out.push(u.with_name(name));
    }
    Ok(out)
}

/// A radial bump centred in the body and an off-centre one.
pub fn convex_battery(body: &ConvexBody) -> Result<Vec<TestFunction>> {
    let (lo, hi) = body.bounding_box();
    let d = lo.len();
    let c: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let width = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
    if d == 1 {
        let r = 0.4 * width;
        return Ok(vec![
            TestFunction::bump(c[0] - r, c[0] + r)?.with_name("centred"),
            TestFunction::hat(c[0] - 0.45 * width, c[0] - 0.3 * width, c[0] + 0.1 * width)?.with_name("off-centre"),
        ]);
    }
    let inscribed = body.dist_boundary(&c)?;
    let centred = TestFunction::radial_bump(&c, 0.8 * inscribed)?.with_name("centred");
    let mut shifted = c.clone();
    shifted[0] += 0.3 * inscribed;
    shifted[d - 1] -= 0.2 * inscribed;
    let r = 0.6 * body.dist_boundary(&shifted)?;
    let off = TestFunction::radial_bump(&shifted, r)?.with_name("off-centre");
    Ok(vec![centred, off])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batteries_are_seeded() {
        let a = halfspace_battery(12, 3).unwrap();
        let b = halfspace_battery(12, 3).unwrap();
        let c = halfspace_battery(12, 4).unwrap();
        let names = |v: &[TestFunction]| v.iter().map(|u| u.name().to_string()).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
        assert_ne!(names(&a), names(&c));
        assert!(a.iter().all(|u| u.support_box().0[0] > 0.0));
        for u in halfspace_battery_nd(6, 2, 3).unwrap() {
            assert_eq!(u.dim(), 2);
            assert!(u.support_box().0[1] > 0.0);
        }
    }

    #[test]
    fn interval_functions_stay_inside() {
        let j = [(0.0, 1.0), (2.0, 3.0)];
        for u in interval_battery(20, &j, 1).unwrap() {
            assert_eq!(u.segments().len(), 2, "{}", u.name());
            for &(a, b) in u.segments() {
                assert!(j.iter().any(|&(c, d)| c < a && b < d));
            }
        }
    }

    #[test]
    fn convex_functions_stay_inside() {
        let disk = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        for u in convex_battery(&disk).unwrap() {
            let (lo, hi) = u.support_box();
            let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
            let r = 0.5 * (hi[0] - lo[0]);
            assert!(disk.dist_boundary(&c).unwrap() > r);
        }
    }
}
