use serde::Serialize;

use crate::config::{OutputFormat, RunConfig, SCHEMA_VERSION};
use hardy_core::Estimate;

/// A value with its error bar; every number in a report has one.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Num {
    pub value: f64,
    pub error: f64,
}

impl Num {
    /// Closed-form value: the error is a rounding bound.
    pub fn closed(value: f64) -> Self {
        Num { value, error: 8.0 * f64::EPSILON * value.abs() }
    }

    /// Closed-form value computed as a difference of terms of size `scale`.
    pub fn cancelling(value: f64, scale: f64) -> Self {
        Num { value, error: 8.0 * f64::EPSILON * value.abs().max(scale.abs()) }
    }
}

impl From<&Estimate> for Num {
    fn from(e: &Estimate) -> Self {
        Num { value: e.value, error: e.error }
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(u64),
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            // 17 significant digits round-trip every f64
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.9e}"),
            other => other.csv(),
        }
    }
}

/// What a command produced.
pub struct Outcome {
    pub result: serde_json::Value,
    pub table: Table,
    pub passed: bool,
}

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    config: &'a RunConfig,
    result: &'a serde_json::Value,
    passed: bool,
}

pub fn render(config: &RunConfig, outcome: &Outcome) -> Result<String, String> {
    match config.output {
        OutputFormat::Json => {
            let doc = Document {
                schema_version: SCHEMA_VERSION,
                config,
                result: &outcome.result,
                passed: outcome.passed,
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&outcome.table.headers).map_err(|e| e.to_string())?;
            for row in &outcome.table.rows {
                w.write_record(row.iter().map(Cell::csv)).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        OutputFormat::Plain => {
            let cells: Vec<Vec<String>> = outcome
                .table
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::plain).collect())
                .collect();
            let mut widths: Vec<usize> = outcome.table.headers.iter().map(|h| h.len()).collect();
            for r in &cells {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |items: Vec<&str>| {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = line(outcome.table.headers.clone());
            out.push('\n');
            for r in &cells {
                out.push_str(&line(r.iter().map(String::as_str).collect()));
                out.push('\n');
            }
            out.push_str(if outcome.passed { "all checks passed\n" } else { "CHECK FAILED\n" });
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-300, -7.25e12] {
            let s = Cell::Float(x).csv();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
