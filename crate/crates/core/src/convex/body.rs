use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

/// Convex bodies with closed-form ray distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "shape")]
pub enum ConvexBody {
    Interval { a: f64, b: f64 },
    AxisBox { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : n_k · x < o_k for all k}`.
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

impl ConvexBody {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(HardyError::invalid(format!("empty interval ({a}, {b})")));
        }
        Ok(ConvexBody::Interval { a, b })
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(HardyError::invalid("box needs lo < hi in every coordinate"));
        }
        Ok(ConvexBody::AxisBox { lo, hi })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius > 0.0) {
            return Err(HardyError::invalid("ball needs a center and a positive radius"));
        }
        Ok(ConvexBody::Ball { center, radius })
    }

    /// Intersection of half-spaces `n_k · x < o_k`; must be bounded with
    /// nonempty interior.
    pub fn polytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        let d = normals.first().map(|n| n.len()).unwrap_or(0);
        if d == 0 || d > 3 || normals.len() != offsets.len() || normals.iter().any(|n| n.len() != d) {
            return Err(HardyError::invalid("polytope needs matching normals/offsets in d ≤ 3"));
        }
        if normals.iter().any(|n| !(norm(n) > 0.0)) {
            return Err(HardyError::invalid("polytope normals must be nonzero"));
        }
        let body = ConvexBody::Polytope { normals, offsets };
        let verts = body.vertices();
        if verts.len() <= d {
            return Err(HardyError::invalid("polytope is unbounded or has empty interior"));
        }
        let centroid: Vec<f64> = (0..d)
            .map(|i| verts.iter().map(|v| v[i]).sum::<f64>() / verts.len() as f64)
            .collect();
        if !body.contains(&centroid) {
            return Err(HardyError::invalid("polytope has empty interior"));
        }
        Ok(body)
    }

    /// Convex polygon through the given vertices (either orientation).
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(HardyError::invalid("polygon needs at least three vertices"));
        }
        let k = vertices.len() as f64;
        let c = [
            vertices.iter().map(|v| v[0]).sum::<f64>() / k,
            vertices.iter().map(|v| v[1]).sum::<f64>() / k,
        ];
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for (i, a) in vertices.iter().enumerate() {
            let b = vertices[(i + 1) % vertices.len()];
            let mut n = vec![b[1] - a[1], a[0] - b[0]];
            let mut o = n[0] * a[0] + n[1] * a[1];
            if n[0] * c[0] + n[1] * c[1] > o {
                n = vec![-n[0], -n[1]];
                o = -o;
            }
            normals.push(n);
            offsets.push(o);
        }
        Self::polytope(normals, offsets)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Interval { .. } => 1,
            ConvexBody::AxisBox { lo, .. } => lo.len(),
            ConvexBody::Ball { center, .. } => center.len(),
            ConvexBody::Polytope { normals, .. } => normals[0].len(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::Interval { a, b } => x[0] > *a && x[0] < *b,
            ConvexBody::AxisBox { lo, hi } => {
                x.iter().zip(lo.iter().zip(hi)).all(|(t, (l, h))| t > l && t < h)
            }
            ConvexBody::Ball { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                r2 < radius * radius
            }
            ConvexBody::Polytope { normals, offsets } => {
                normals.iter().zip(offsets).all(|(n, o)| dot(n, x) < *o)
            }
        }
    }

    fn check_inside(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(HardyError::invalid(format!(
                "point has dimension {}, body has {}",
                x.len(),
                self.dim()
            )));
        }
        if !self.contains(x) {
            return Err(HardyError::domain(format!("{x:?} is not inside the body")));
        }
        Ok(())
    }

    /// Distance from an interior `x` to the boundary along `+ω`.
    pub fn ray(&self, x: &[f64], omega: &[f64]) -> f64 {
        match self {
            ConvexBody::Interval { a, b } => {
                if omega[0] > 0.0 {
                    (b - x[0]) / omega[0]
                } else if omega[0] < 0.0 {
                    (a - x[0]) / omega[0]
                } else {
                    f64::INFINITY
                }
            }
            ConvexBody::AxisBox { lo, hi } => {
                let mut t = f64::INFINITY;
                for i in 0..x.len() {
                    if omega[i] > 0.0 {
                        t = t.min((hi[i] - x[i]) / omega[i]);
                    } else if omega[i] < 0.0 {
                        t = t.min((lo[i] - x[i]) / omega[i]);
                    }
                }
                t
            }
            ConvexBody::Ball { center, radius } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let b = dot(&v, omega);
                let r = norm(&v);
                // R² - |v|² factored to keep precision near the sphere
                let slack = (radius - r) * (radius + r);
                let root = (b * b + slack).max(0.0).sqrt();
                if b > 0.0 {
                    slack / (b + root)
                } else {
                    root - b
                }
            }
            ConvexBody::Polytope { normals, offsets } => {
                let mut t = f64::INFINITY;
                for (n, o) in normals.iter().zip(offsets) {
                    let s = dot(n, omega);
                    if s > 0.0 {
                        t = t.min((o - dot(n, x)) / s);
                    }
                }
                t
            }
        }
    }

    /// `d_{ω,Ω}(x) = min{|t| : x + tω ∉ Ω}`.
    pub fn dir_dist(&self, x: &[f64], omega: &[f64]) -> Result<f64> {
        self.check_inside(x)?;
        Ok(self.dir_dist_unchecked(x, omega))
    }

    pub(crate) fn dir_dist_unchecked(&self, x: &[f64], omega: &[f64]) -> f64 {
        let back: Vec<f64> = omega.iter().map(|w| -w).collect();
        self.ray(x, omega).min(self.ray(x, &back))
    }

    /// `dist(x, ∂Ω)`.
    pub fn dist_boundary(&self, x: &[f64]) -> Result<f64> {
        self.check_inside(x)?;
        Ok(match self {
            ConvexBody::Interval { a, b } => (x[0] - a).min(b - x[0]),
            ConvexBody::AxisBox { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(t, (l, h))| (t - l).min(h - t))
                .fold(f64::INFINITY, f64::min),
            ConvexBody::Ball { center, radius } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                radius - norm(&v)
            }
            ConvexBody::Polytope { normals, offsets } => normals
                .iter()
                .zip(offsets)
                .map(|(n, o)| (o - dot(n, x)) / norm(n))
                .fold(f64::INFINITY, f64::min),
        })
    }

    /// Parameter range `(s0, s1)` of `{q + sω} ∩ Ω`, if nonempty.
    pub fn chord(&self, q: &[f64], omega: &[f64]) -> Option<(f64, f64)> {
        let (mut s0, mut s1) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut clip = |n: &[f64], o: f64| -> bool {
            // n · (q + sω) < o
            let a = dot(n, omega);
            let b = o - dot(n, q);
            if a.abs() < 1e-300 {
                return b > 0.0;
            }
            let t = b / a;
            if a > 0.0 {
                s1 = s1.min(t);
            } else {
                s0 = s0.max(t);
            }
            true
        };
        let ok = match self {
            ConvexBody::Interval { a, b } => clip(&[1.0], *b) && clip(&[-1.0], -a),
            ConvexBody::AxisBox { lo, hi } => (0..lo.len()).all(|i| {
                let mut e = vec![0.0; lo.len()];
                e[i] = 1.0;
                let up = clip(&e, hi[i]);
                e[i] = -1.0;
                up && clip(&e, -lo[i])
            }),
            ConvexBody::Polytope { normals, offsets } => {
                normals.iter().zip(offsets).all(|(n, o)| clip(n, *o))
            }
            ConvexBody::Ball { center, radius } => {
                let v: Vec<f64> = q.iter().zip(center).map(|(a, c)| a - c).collect();
                let w2 = dot(omega, omega);
                let b = dot(&v, omega) / w2;
                let disc = b * b - (dot(&v, &v) - radius * radius) / w2;
                if disc <= 0.0 {
                    return None;
                }
                return Some((-b - disc.sqrt(), -b + disc.sqrt()));
            }
        };
        (ok && s0 < s1).then_some((s0, s1))
    }

    /// Vertices of boxes and polytopes (empty for balls).
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        match self {
            ConvexBody::Interval { a, b } => vec![vec![*a], vec![*b]],
            ConvexBody::AxisBox { lo, hi } => {
                let d = lo.len();
                (0..1usize << d)
                    .map(|mask| (0..d).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect())
                    .collect()
            }
            ConvexBody::Ball { .. } => Vec::new(),
            ConvexBody::Polytope { normals, offsets } => {
                let d = normals[0].len();
                let m = normals.len();
                let mut out: Vec<Vec<f64>> = Vec::new();
                let mut idx: Vec<usize> = (0..d).collect();
                if m < d {
                    return out;
                }
                loop {
                    let a: Vec<Vec<f64>> = idx.iter().map(|&k| normals[k].clone()).collect();
                    let b: Vec<f64> = idx.iter().map(|&k| offsets[k]).collect();
                    if let Some(v) = solve(a, b) {
                        let feasible = normals
                            .iter()
                            .zip(offsets)
                            .all(|(n, o)| dot(n, &v) <= o + 1e-9 * (1.0 + o.abs()));
                        let fresh = out.iter().all(|w| norm(&w.iter().zip(&v).map(|(p, q)| p - q).collect::<Vec<_>>()) > 1e-9);
                        if feasible && fresh {
                            out.push(v);
                        }
                    }
                    // next combination of d indices out of m
                    let mut i = d;
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        if idx[i] < m - d + i {
                            idx[i] += 1;
                            for j in i + 1..d {
                                idx[j] = idx[j - 1] + 1;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            ConvexBody::Interval { a, b } => (vec![*a], vec![*b]),
            ConvexBody::AxisBox { lo, hi } => (lo.clone(), hi.clone()),
            ConvexBody::Ball { center, radius } => (
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            ),
            ConvexBody::Polytope { .. } => {
                let v = self.vertices();
                let d = self.dim();
                (
                    (0..d).map(|i| v.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min)).collect(),
                    (0..d).map(|i| v.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max)).collect(),
                )
            }
        }
    }
}
