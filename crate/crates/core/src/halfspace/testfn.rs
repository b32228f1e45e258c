use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Hat,
    Bump,
    Product,
    Extremal,
    User,
}

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A compactly supported continuous function on `R^d`.
///
/// Besides the closure it records an axis-aligned box containing the
/// support, the points where it fails to be smooth along each axis, and for
/// `d = 1` the disjoint segments making up the support. Evaluation outside
/// the support returns exactly zero regardless of the closure.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    kind: FunctionKind,
    lo: Vec<f64>,
    hi: Vec<f64>,
    segments: Vec<(f64, f64)>,
    breaks: Vec<Vec<f64>>,
    lipschitz_hint: Option<f64>,
    eval: Eval,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("segments", &self.segments)
            .finish_non_exhaustive()
    }
}

fn bump_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

impl TestFunction {
    /// General constructor. `breaks[i]` lists interior kinks along axis `i`.
    pub fn user(
        name: impl Into<String>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        breaks: Vec<Vec<f64>>,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(name.into(), FunctionKind::User, lo, hi, breaks, None, Arc::new(eval))
    }

    fn build(
        name: String,
        kind: FunctionKind,
        lo: Vec<f64>,
        hi: Vec<f64>,
        mut breaks: Vec<Vec<f64>>,
        lipschitz_hint: Option<f64>,
        eval: Eval,
    ) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || lo.len() > 3 {
            return Err(HardyError::invalid("support box must have 1 to 3 matching coordinates"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(HardyError::invalid(format!("empty support box {lo:?} .. {hi:?}")));
        }
        breaks.resize(lo.len(), Vec::new());
        for (i, b) in breaks.iter_mut().enumerate() {
            b.retain(|t| *t > lo[i] && *t < hi[i]);
            b.sort_by(f64::total_cmp);
            b.dedup();
        }
        let segments = vec![(lo[0], hi[0])];
        Ok(Self {
            name,
            kind,
            lo,
            hi,
            segments,
            breaks,
            lipschitz_hint,
            eval,
        })
    }

    /// Piecewise linear hat on `[a, b]` with peak 1 at `m`.
    pub fn hat(a: f64, m: f64, b: f64) -> Result<Self> {
        if !(a < m && m < b) {
            return Err(HardyError::invalid(format!("hat needs a < m < b, got {a}, {m}, {b}")));
        }
        let lip = 1.0 / (m - a).min(b - m);
        Self::build(
            format!("hat[{a},{m},{b}]"),
            FunctionKind::Hat,
            vec![a],
            vec![b],
            vec![vec![m]],
            Some(lip),
            Arc::new(move |x: &[f64]| {
                let t = x[0];
                if t <= m {
                    (t - a) / (m - a)
                } else {
                    (b - t) / (b - m)
                }
            }),
        )
    }

    /// Smooth bump `exp(1 - 1/(1-t²))` on `[a, b]`, `t` the affine image in
    /// `[-1, 1]`; peak 1 at the midpoint.
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(HardyError::invalid("bump needs a < b"));
        }
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        Self::build(
            format!("bump[{a},{b}]"),
            FunctionKind::Bump,
            vec![a],
            vec![b],
            vec![vec![c]],
            Some(1.6 / r),
            Arc::new(move |x: &[f64]| bump_profile((x[0] - c) / r)),
        )
    }

    /// Radial bump of radius `r` around `center`.
    pub fn radial_bump(center: &[f64], r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(HardyError::invalid("radius must be positive"));
        }
        let c = center.to_vec();
        let lo: Vec<f64> = c.iter().map(|v| v - r).collect();
        let hi: Vec<f64> = c.iter().map(|v| v + r).collect();
        let breaks = c.iter().map(|v| vec![*v]).collect();
        let cc = c.clone();
        Self::build(
            format!("radial_bump[{c:?},{r}]"),
            FunctionKind::Bump,
            lo,
            hi,
            breaks,
            Some(1.6 / r),
            Arc::new(move |x: &[f64]| {
                let rho2: f64 = x.iter().zip(&cc).map(|(a, b)| (a - b) * (a - b)).sum();
                bump_profile(rho2.sqrt() / r)
            }),
        )
    }

    /// Tensor product `u(x) = Π f_i(x_i)` of one-dimensional factors.
    pub fn product(factors: &[TestFunction]) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|f| f.dim() != 1) {
            return Err(HardyError::invalid("product needs one-dimensional factors"));
        }
        let fs: Vec<TestFunction> = factors.to_vec();
        let name = format!(
            "product[{}]",
            fs.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join("*")
        );
        let lip = fs
            .iter()
            .map(|f| f.lipschitz_hint)
            .try_fold(0.0f64, |acc, l| l.map(|l| acc.hypot(l)));
        Self::build(
            name,
            FunctionKind::Product,
            fs.iter().map(|f| f.lo[0]).collect(),
            fs.iter().map(|f| f.hi[0]).collect(),
            fs.iter().map(|f| f.breaks[0].clone()).collect(),
            lip,
            Arc::new(move |x: &[f64]| fs.iter().zip(x).map(|(f, &t)| f.eval1(t)).product()),
        )
    }

    /// Pointwise product of two one-dimensional functions; the support is
    /// the intersection of the two boxes.
    pub fn times(&self, other: &TestFunction) -> Result<Self> {
        if self.dim() != 1 || other.dim() != 1 {
            return Err(HardyError::invalid("pointwise product is one-dimensional"));
        }
        let lo = self.lo[0].max(other.lo[0]);
        let hi = self.hi[0].min(other.hi[0]);
        let (f, g) = (self.clone(), other.clone());
        let mut breaks = self.breaks[0].clone();
        breaks.extend(&other.breaks[0]);
        breaks.extend([self.lo[0], self.hi[0], other.lo[0], other.hi[0]]);
        Self::build(
            format!("{}*{}", self.name, other.name),
            FunctionKind::Product,
            vec![lo],
            vec![hi],
            vec![breaks],
            None,
            Arc::new(move |x: &[f64]| f.eval1(x[0]) * g.eval1(x[0])),
        )
    }

    /// Sum of one-dimensional functions with pairwise disjoint supports;
    /// the result keeps each support as a separate segment.
    pub fn disjoint_sum(parts: &[TestFunction]) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|f| f.dim() != 1) {
            return Err(HardyError::invalid("disjoint sum needs one-dimensional parts"));
        }
        let mut segments: Vec<(f64, f64)> = parts.iter().flat_map(|f| f.segments.clone()).collect();
        segments.sort_by(|a, b| a.0.total_cmp(&b.0));
        if segments.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(HardyError::invalid("supports of a disjoint sum overlap"));
        }
        let mut breaks: Vec<f64> = parts.iter().flat_map(|f| f.breaks[0].clone()).collect();
        breaks.extend(segments.iter().flat_map(|s| [s.0, s.1]));
        let ps: Vec<TestFunction> = parts.to_vec();
        let name = ps.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join("+");
        let mut out = Self::build(
            name,
            FunctionKind::User,
            vec![segments[0].0],
            vec![segments[segments.len() - 1].1],
            vec![breaks],
            None,
            Arc::new(move |x: &[f64]| ps.iter().map(|f| f.eval1(x[0])).sum()),
        )?;
        out.segments = segments;
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_kind(mut self, kind: FunctionKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn support_box(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    /// Support pieces along the line (one-dimensional functions only).
    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Interior kinks along `axis`.
    pub fn breakpoints(&self, axis: usize) -> &[f64] {
        &self.breaks[axis]
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }

    fn inside(&self, x: &[f64]) -> bool {
        if self.dim() == 1 {
            let t = x[0];
            return self.segments.iter().any(|&(a, b)| t > a && t < b);
        }
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(t, (a, b))| t > a && t < b)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if self.inside(x) {
            (self.eval)(x)
        } else {
            0.0
        }
    }

    pub fn eval1(&self, x: f64) -> f64 {
        self.eval(&[x])
    }

    /// `λ u`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let f = self.eval.clone();
        Self {
            name: format!("{}*{lambda}", self.name),
            lipschitz_hint: self.lipschitz_hint.map(|l| l * lambda.abs()),
            eval: Arc::new(move |x: &[f64]| lambda * f(x)),
            ..self.clone()
        }
    }

    /// `x ↦ u(x - shift)`.
    pub fn translated(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(HardyError::invalid("shift has the wrong dimension"));
        }
        let f = self.eval.clone();
        let s = shift.to_vec();
        let mv = |v: &[f64]| v.iter().zip(&s).map(|(a, b)| a + b).collect::<Vec<_>>();
        Ok(Self {
            name: format!("{}>>{shift:?}", self.name),
            kind: self.kind,
            lo: mv(&self.lo),
            hi: mv(&self.hi),
            segments: self.segments.iter().map(|&(a, b)| (a + s[0], b + s[0])).collect(),
            breaks: self
                .breaks
                .iter()
                .zip(&s)
                .map(|(b, d)| b.iter().map(|t| t + d).collect())
                .collect(),
            lipschitz_hint: self.lipschitz_hint,
            eval: Arc::new({
                let s = s.clone();
                move |x: &[f64]| {
                    let y: Vec<f64> = x.iter().zip(&s).map(|(a, b)| a - b).collect();
                    f(&y)
                }
            }),
        })
    }

    /// `x ↦ u(2c - x)` (one-dimensional).
    pub fn reflected(&self, c: f64) -> Result<Self> {
        if self.dim() != 1 {
            return Err(HardyError::invalid("reflection is one-dimensional"));
        }
        let f = self.eval.clone();
        let mut segments: Vec<(f64, f64)> =
            self.segments.iter().map(|&(a, b)| (2.0 * c - b, 2.0 * c - a)).collect();
        segments.reverse();
        let mut breaks: Vec<f64> = self.breaks[0].iter().map(|t| 2.0 * c - t).collect();
        breaks.reverse();
        Ok(Self {
            name: format!("{}|{c}", self.name),
            kind: self.kind,
            lo: vec![2.0 * c - self.hi[0]],
            hi: vec![2.0 * c - self.lo[0]],
            segments,
            breaks: vec![breaks],
            lipschitz_hint: self.lipschitz_hint,
            eval: Arc::new(move |x: &[f64]| f(&[2.0 * c - x[0]])),
        })
    }

    /// `x ↦ u(x / L)`.
    pub fn dilated(&self, l: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(HardyError::invalid("dilation factor must be positive"));
        }
        let f = self.eval.clone();
        Ok(Self {
            name: format!("{}@{l}", self.name),
            kind: self.kind,
            lo: self.lo.iter().map(|t| t * l).collect(),
            hi: self.hi.iter().map(|t| t * l).collect(),
            segments: self.segments.iter().map(|&(a, b)| (a * l, b * l)).collect(),
            breaks: self
                .breaks
                .iter()
                .map(|b| b.iter().map(|t| t * l).collect())
                .collect(),
            lipschitz_hint: self.lipschitz_hint.map(|h| h / l),
            eval: Arc::new(move |x: &[f64]| {
                let y: Vec<f64> = x.iter().map(|t| t / l).collect();
                f(&y)
            }),
        })
    }

    /// All kinks along the line including segment ends (one-dimensional).
    pub(crate) fn line_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.breaks[0].clone();
        pts.extend(self.segments.iter().flat_map(|s| [s.0, s.1]));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_and_support() {
        let h = TestFunction::hat(1.0, 1.5, 2.0).unwrap();
        assert_eq!(h.eval1(1.5), 1.0);
        assert_eq!(h.eval1(1.25), 0.5);
        assert_eq!(h.eval1(0.5), 0.0);
        assert_eq!(h.eval1(2.5), 0.0);
        assert!(TestFunction::hat(1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn transforms() {
        let h = TestFunction::hat(1.0, 1.25, 2.0).unwrap();
        let r = h.reflected(1.5).unwrap();
        assert!((r.eval1(1.75) - 1.0).abs() < 1e-15);
        assert_eq!(r.breakpoints(0), &[1.75]);
        let t = h.translated(&[3.0]).unwrap();
        assert_eq!(t.eval1(4.25), 1.0);
        let d = h.dilated(2.0).unwrap();
        assert_eq!(d.eval1(2.5), 1.0);
        assert_eq!(d.support_box().1, &[4.0]);
        assert_eq!(h.scaled(-2.0).eval1(1.25), -2.0);
    }

    #[test]
    fn composite_supports() {
        let s = TestFunction::disjoint_sum(&[
            TestFunction::hat(2.2, 2.5, 2.9).unwrap(),
            TestFunction::bump(0.1, 0.9).unwrap(),
        ])
        .unwrap();
        assert_eq!(s.segments(), &[(0.1, 0.9), (2.2, 2.9)]);
        assert_eq!(s.eval1(1.5), 0.0);
        assert_eq!(s.eval1(0.5), 1.0);
        let p = TestFunction::product(&[
            TestFunction::bump(-1.0, 1.0).unwrap(),
            TestFunction::hat(1.0, 2.0, 3.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.eval(&[0.0, 2.0]), 1.0);
        assert!(TestFunction::disjoint_sum(&[
            TestFunction::hat(0.0, 0.5, 1.0).unwrap(),
            TestFunction::hat(0.5, 1.0, 1.5).unwrap(),
        ])
        .is_err());
    }
}
