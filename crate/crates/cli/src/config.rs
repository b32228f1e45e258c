use serde::Serialize;

use hardy_core::convex::ConvexBody;
use hardy_core::{EngineConfig, HardyError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsConfig {
    pub d: usize,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineSettings {
    pub tol: f64,
    pub samples: u64,
    pub strata: u32,
    pub seed: u64,
}

impl EngineSettings {
    pub fn engine(&self) -> EngineConfig {
        EngineConfig {
            tol: self.tol,
            samples: self.samples,
            strata: self.strata,
            seed: self.seed,
            ..EngineConfig::default()
        }
    }
}

/// Everything that determines a report; embedded verbatim in JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub params: ParamsConfig,
    pub engine: EngineSettings,
    pub output: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
}

impl RunConfig {
    pub fn require_p(&self) -> Result<f64> {
        self.params
            .p
            .ok_or_else(|| HardyError::invalid(format!("--p is required for {}", self.command)))
    }

    pub fn require_alpha(&self) -> Result<f64> {
        self.params
            .alpha
            .ok_or_else(|| HardyError::invalid(format!("--alpha is required for {}", self.command)))
    }
}

fn numbers(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| HardyError::invalid(format!("cannot parse '{t}' as a number")))
        })
        .collect()
}

/// `interval@a,b[,c,d...]`: sorted disjoint components.
pub fn parse_components(spec: &str) -> Result<Vec<(f64, f64)>> {
    let (kind, params) = split(spec)?;
    if kind != "interval" {
        return Err(HardyError::invalid(format!("expected interval@a,b,..., got {spec}")));
    }
    let v = numbers(params)?;
    if v.is_empty() || v.len() % 2 != 0 {
        return Err(HardyError::invalid("interval needs an even number of endpoints"));
    }
    Ok(v.chunks(2).map(|c| (c[0], c[1])).collect())
}

fn split(spec: &str) -> Result<(&str, &str)> {
    spec.split_once('@')
        .ok_or_else(|| HardyError::invalid(format!("body '{spec}' must look like kind@params")))
}

/// `interval@a,b`, `box@lo..,hi..`, `ball@c..,r`, `polytope@x1,y1,x2,y2,...`.
pub fn parse_body(spec: &str) -> Result<ConvexBody> {
    let (kind, params) = split(spec)?;
    let v = numbers(params)?;
    match kind {
        "interval" => {
            if v.len() != 2 {
                return Err(HardyError::invalid("convex interval takes exactly two endpoints"));
            }
            ConvexBody::interval(v[0], v[1])
        }
        "box" => {
            if v.is_empty() || v.len() % 2 != 0 {
                return Err(HardyError::invalid("box takes lo coordinates followed by hi coordinates"));
            }
            let d = v.len() / 2;
            ConvexBody::axis_box(v[..d].to_vec(), v[d..].to_vec())
        }
        "ball" => {
            if v.len() < 2 {
                return Err(HardyError::invalid("ball takes a centre followed by a radius"));
            }
            let r = v[v.len() - 1];
            ConvexBody::ball(v[..v.len() - 1].to_vec(), r)
        }
        "polytope" => {
            if v.len() < 6 || v.len() % 2 != 0 {
                return Err(HardyError::invalid("polytope takes at least three planar vertices"));
            }
            let verts: Vec<[f64; 2]> = v.chunks(2).map(|c| [c[0], c[1]]).collect();
            ConvexBody::polygon(&verts)
        }
        other => Err(HardyError::invalid(format!(
            "unknown body kind '{other}' (interval, box, ball, polytope)"
        ))),
    }
}

/// `4,16,64`; an empty list is an error.
pub fn parse_n_list(spec: &str) -> Result<Vec<u32>> {
    let items: Vec<&str> = spec.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return Err(HardyError::invalid("--n needs at least one value"));
    }
    items
        .iter()
        .map(|t| {
            t.parse::<u32>()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| HardyError::invalid(format!("'{t}' is not a positive integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bodies() {
        assert_eq!(parse_body("ball@0,0,1").unwrap().dim(), 2);
        assert_eq!(parse_body("box@0,0,1,1").unwrap().dim(), 2);
        assert_eq!(parse_body("polytope@0,0,1,0,0,1").unwrap().vertices().len(), 3);
        assert!(parse_body("torus@1").is_err());
        assert!(parse_body("ball").is_err());
        assert_eq!(parse_components("interval@0,1,2,3").unwrap(), vec![(0.0, 1.0), (2.0, 3.0)]);
    }

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("4, 16,64").unwrap(), vec![4, 16, 64]);
        assert!(parse_n_list("").is_err());
        assert!(parse_n_list("0").is_err());
    }
}
