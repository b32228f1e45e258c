use serde::Serialize;
use serde_json::json;

use crate::config::{parse_body, parse_components, RunConfig};
use crate::output::{Cell, Num, Outcome, Table};
use hardy_core::battery::{convex_battery, halfspace_battery, halfspace_battery_nd, interval_battery};
use hardy_core::convex::{check_alpha, verify_convex, verify_interval, ConvexBody};
use hardy_core::halfspace::{extremal_sweep, gamma_ab, verify_halfspace, HardyReport, TestFunction};
use hardy_core::specfun::{a_const, angular_factor, gamma_ab_quad, kappa, kappa_bd};
use hardy_core::{HardyError, HardyParams, Result};

const CONJ_TOL: f64 = 1e-12;

fn conj_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONJ_TOL * (1.0 + a.abs().max(b.abs()))
}

fn gamma_num(alpha: f64, beta: f64, tol: f64) -> Result<Num> {
    if alpha == 1.0 {
        Ok(Num::from(&gamma_ab_quad(alpha, beta, tol)?))
    } else {
        Ok(Num::cancelling(gamma_ab(alpha, beta, tol)?, 1.0))
    }
}

pub fn constants(cfg: &RunConfig) -> Result<Outcome> {
    let (d, p, alpha) = (cfg.params.d, cfg.require_p()?, cfg.require_alpha()?);
    let params = HardyParams::new(d, p, alpha)?;
    let k = kappa(d, p, alpha)?;
    let kc = kappa(d, params.p_conj(), alpha)?;
    let gamma = gamma_num(alpha, params.beta(), cfg.engine.tol)?;
    let ang = angular_factor(d, alpha)?;
    let fields = [
        ("kappa", Num::cancelling(k, ang)),
        ("kappa_conj", Num::cancelling(kc, ang)),
        ("kappa_bd", Num::cancelling(kappa_bd(d, alpha)?, ang)),
        ("gamma", gamma),
        ("a_const", Num::closed(a_const(d, alpha)?)),
        ("angular_factor", Num::closed(ang)),
    ];
    let symmetric = conj_close(k, kc);
    let mut result = serde_json::Map::new();
    result.insert("d".into(), json!(d));
    result.insert("p".into(), json!(p));
    result.insert("p_conj".into(), json!(params.p_conj()));
    result.insert("alpha".into(), json!(alpha));
    result.insert("beta".into(), json!(params.beta()));
    for (name, v) in &fields {
        result.insert((*name).into(), serde_json::to_value(v).expect("plain numbers serialize"));
    }
    result.insert("conjugate_symmetric".into(), json!(symmetric));
    let table = Table {
        headers: vec!["quantity", "value", "error"],
        rows: fields
            .iter()
            .map(|(n, v)| vec![Cell::Text((*n).into()), Cell::Float(v.value), Cell::Float(v.error)])
            .collect(),
    };
    Ok(Outcome { result: result.into(), table, passed: symmetric })
}

#[derive(Serialize)]
struct ReportRow {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<&'static str>,
    lhs: Num,
    rhs: Num,
    constant: f64,
    ratio: Num,
    margin: Num,
    verdict: hardy_core::halfspace::Verdict,
}

impl ReportRow {
    fn new(r: &HardyReport, weight: Option<&'static str>) -> Self {
        ReportRow {
            name: r.name.clone(),
            weight,
            lhs: Num::from(&r.lhs),
            rhs: Num::from(&r.rhs),
            constant: r.constant,
            ratio: Num { value: r.ratio, error: r.ratio_error },
            margin: Num { value: r.margin, error: r.tolerance },
            verdict: r.verdict,
        }
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Text(self.name.clone()),
            Cell::Text(self.weight.unwrap_or("").into()),
            Cell::Float(self.lhs.value),
            Cell::Float(self.lhs.error),
            Cell::Float(self.rhs.value),
            Cell::Float(self.rhs.error),
            Cell::Float(self.constant),
            Cell::Float(self.ratio.value),
            Cell::Float(self.ratio.error),
            Cell::Float(self.margin.value),
            Cell::Float(self.margin.error),
            Cell::Text(format!("{:?}", self.verdict).to_lowercase()),
        ]
    }
}

const REPORT_HEADERS: [&str; 12] = [
    "name",
    "weight",
    "lhs",
    "lhs_error",
    "rhs",
    "rhs_error",
    "constant",
    "ratio",
    "ratio_error",
    "margin",
    "tolerance",
    "verdict",
];

/// `default`, `small`, or an explicit count.
fn battery_size(name: &str, default: usize, small: usize) -> Result<usize> {
    match name {
        "default" => Ok(default),
        "small" => Ok(small),
        other => other
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| HardyError::invalid(format!("unknown battery '{other}' (default, small or a count)"))),
    }
}

fn report_outcome(target: &str, rows: Vec<ReportRow>, extra: serde_json::Value, extra_ok: bool) -> Outcome {
    let passed = extra_ok && rows.iter().all(|r| r.verdict == hardy_core::halfspace::Verdict::Pass);
    let table = Table {
        headers: REPORT_HEADERS.to_vec(),
        rows: rows.iter().map(ReportRow::cells).collect(),
    };
    let failures = rows.iter().filter(|r| r.verdict != hardy_core::halfspace::Verdict::Pass).count();
    let result = json!({
        "target": target,
        "functions": rows.len(),
        "failures": failures,
        "checks": extra,
        "reports": rows,
    });
    Outcome { result, table, passed }
}

fn battery_name(cfg: &RunConfig) -> &str {
    cfg.battery.as_deref().unwrap_or("default")
}

pub fn verify(cfg: &RunConfig, target: &str) -> Result<Outcome> {
    let alpha = cfg.require_alpha()?;
    if target != "halfspace" {
        check_alpha(alpha)?;
    }
    let p = cfg.require_p()?;
    let engine = cfg.engine.engine();
    let seed = cfg.engine.seed;
    match target {
        "halfspace" => {
            let d = cfg.params.d;
            let params = HardyParams::new(d, p, alpha)?;
            let funcs: Vec<TestFunction> = if d == 1 {
                halfspace_battery(battery_size(battery_name(cfg), 50, 12)?, seed)?
            } else {
                halfspace_battery_nd(battery_size(battery_name(cfg), 8, 3)?, d, seed)?
            };
            let rows = funcs
                .iter()
                .map(|u| verify_halfspace(u, &params, &engine).map(|r| ReportRow::new(&r, None)))
                .collect::<Result<Vec<_>>>()?;
            Ok(report_outcome(target, rows, json!({}), true))
        }
        "interval" => {
            let j = parse_components(cfg.body.as_deref().unwrap_or("interval@0,1"))?;
            let funcs = interval_battery(battery_size(battery_name(cfg), 20, 6)?, &j, seed)?;
            let rows = funcs
                .iter()
                .map(|u| verify_interval(u, &j, p, alpha, &engine).map(|r| ReportRow::new(&r, None)))
                .collect::<Result<Vec<_>>>()?;
            Ok(report_outcome(target, rows, json!({ "components": j }), true))
        }
        "convex" => {
            let body = match cfg.body.as_deref() {
                Some(spec) => parse_body(spec)?,
                None => ConvexBody::ball(vec![0.0; cfg.params.d.max(2)], 1.0)?,
            };
            let funcs = convex_battery(&body)?;
            let mut rows = Vec::new();
            let mut dominates = true;
            for u in &funcs {
                let m = verify_convex(u, &body, p, alpha, true, &engine)?;
                let dist = verify_convex(u, &body, p, alpha, false, &engine)?;
                dominates &= m.rhs.value + m.rhs.error + dist.rhs.error >= dist.rhs.value;
                rows.push(ReportRow::new(&m, Some("m_alpha")));
                rows.push(ReportRow::new(&dist, Some("dist")));
            }
            Ok(report_outcome(target, rows, json!({ "m_alpha_rhs_dominates": dominates }), dominates))
        }
        other => Err(HardyError::invalid(format!("unknown target {other}"))),
    }
}

const ALPHA_GRID: [f64; 19] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9,
];
const P_GRID: [f64; 8] = [1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0];

pub fn sweep(cfg: &RunConfig, kind: &str) -> Result<Outcome> {
    let d = cfg.params.d;
    match kind {
        "extremal" => {
            let (p, alpha) = (cfg.require_p()?, cfg.require_alpha()?);
            let n = cfg.n.clone().unwrap_or_else(|| vec![4, 16, 64, 256]);
            let rows = extremal_sweep(p, alpha, d, &n, &cfg.engine.engine())?;
            let positive = rows.iter().all(|r| r.gap > -r.ratio_error);
            let monotone = rows
                .windows(2)
                .all(|w| w[1].gap <= w[0].gap + w[0].ratio_error + w[1].ratio_error);
            let table = Table {
                headers: vec![
                    "n", "lhs", "lhs_error", "rhs", "rhs_error", "ratio", "ratio_error", "gap", "gap_error",
                    "gap_log_n", "gap_log_n_error",
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        let ln = f64::from(r.n).ln();
                        vec![
                            Cell::Int(u64::from(r.n)),
                            Cell::Float(r.lhs.value),
                            Cell::Float(r.lhs.error),
                            Cell::Float(r.rhs.value),
                            Cell::Float(r.rhs.error),
                            Cell::Float(r.ratio),
                            Cell::Float(r.ratio_error),
                            Cell::Float(r.gap),
                            Cell::Float(r.ratio_error),
                            Cell::Float(r.gap_log_n),
                            Cell::Float(r.ratio_error * ln),
                        ]
                    })
                    .collect(),
            };
            let json_rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "lhs": Num::from(&r.lhs),
                        "rhs": Num::from(&r.rhs),
                        "ratio": Num { value: r.ratio, error: r.ratio_error },
                        "gap": Num { value: r.gap, error: r.ratio_error },
                        "gap_log_n": Num { value: r.gap_log_n, error: r.ratio_error * f64::from(r.n).ln() },
                    })
                })
                .collect();
            let result = json!({
                "kind": kind,
                "kappa": Num::cancelling(kappa(d, p, alpha)?, angular_factor(d, alpha)?),
                "gaps_positive": positive,
                "gaps_nonincreasing": monotone,
                "rows": json_rows,
            });
            Ok(Outcome { result, table, passed: positive && monotone })
        }
        "alpha-grid" => {
            let p = cfg.require_p()?;
            let mut rows = Vec::new();
            let mut ok = true;
            let mut table = Table {
                headers: vec!["alpha", "kappa", "kappa_error", "kappa_bd", "kappa_bd_error", "kappa_conj", "kappa_conj_error"],
                rows: Vec::new(),
            };
            for &alpha in &ALPHA_GRID {
                let params = HardyParams::new(d, p, alpha)?;
                let ang = angular_factor(d, alpha)?;
                let k = Num::cancelling(kappa(d, p, alpha)?, ang);
                let kb = Num::cancelling(kappa_bd(d, alpha)?, ang);
                let kc = Num::cancelling(kappa(d, params.p_conj(), alpha)?, ang);
                ok &= conj_close(k.value, kc.value);
                if p == 2.0 {
                    ok &= conj_close(k.value, kb.value);
                }
                table.rows.push(vec![
                    Cell::Float(alpha),
                    Cell::Float(k.value),
                    Cell::Float(k.error),
                    Cell::Float(kb.value),
                    Cell::Float(kb.error),
                    Cell::Float(kc.value),
                    Cell::Float(kc.error),
                ]);
                rows.push(json!({ "alpha": alpha, "kappa": k, "kappa_bd": kb, "kappa_conj": kc }));
            }
            Ok(Outcome { result: json!({ "kind": kind, "rows": rows }), table, passed: ok })
        }
        "p-grid" => {
            let alpha = cfg.require_alpha()?;
            let mut rows = Vec::new();
            let mut ok = true;
            let mut table = Table {
                headers: vec!["p", "p_conj", "beta", "kappa", "kappa_error", "kappa_conj", "kappa_conj_error"],
                rows: Vec::new(),
            };
            for &p in &P_GRID {
                let params = HardyParams::new(d, p, alpha)?;
                let ang = angular_factor(d, alpha)?;
                let k = Num::cancelling(kappa(d, p, alpha)?, ang);
                let kc = Num::cancelling(kappa(d, params.p_conj(), alpha)?, ang);
                ok &= conj_close(k.value, kc.value);
                table.rows.push(vec![
                    Cell::Float(p),
                    Cell::Float(params.p_conj()),
                    Cell::Float(params.beta()),
                    Cell::Float(k.value),
                    Cell::Float(k.error),
                    Cell::Float(kc.value),
                    Cell::Float(kc.error),
                ]);
                rows.push(json!({ "p": p, "p_conj": params.p_conj(), "beta": params.beta(), "kappa": k, "kappa_conj": kc }));
            }
            Ok(Outcome { result: json!({ "kind": kind, "rows": rows }), table, passed: ok })
        }
        other => Err(HardyError::invalid(format!("unknown sweep {other}"))),
    }
}
