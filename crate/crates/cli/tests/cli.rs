use std::process::{Command, Output};

use serde_json::Value;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(args)
        .env("HARDY_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = hardy(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn constants_json_schema() {
    let v = json(&["constants", "--d", "2", "--p", "3", "--alpha", "1.5", "--json", "--seed", "3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["engine"]["seed"], 3);
    assert_eq!(v["config"]["params"]["d"], 2);
    assert_eq!(v["passed"], true);
    let r = &v["result"];
    for key in ["kappa", "kappa_conj", "kappa_bd", "gamma", "a_const", "angular_factor"] {
        assert!(r[key]["value"].is_f64(), "{key}");
        assert!(r[key]["error"].as_f64().unwrap() >= 0.0, "{key}");
    }
    assert_eq!(r["kappa"], r["kappa_conj"]);
    let k = r["kappa"]["value"].as_f64().unwrap();
    assert!((k - 0.32273945139489724).abs() < 1e-14);
}

#[test]
fn constants_at_alpha_one_vanish() {
    let v = json(&["constants", "--p", "2", "--alpha", "1", "--json"]);
    assert_eq!(v["result"]["kappa"]["value"], 0.0);
    assert_eq!(v["result"]["kappa_bd"]["value"], 0.0);
}

#[test]
fn csv_output_parses() {
    let out = hardy(&["constants", "--p", "2", "--alpha", "1.5", "--csv"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["quantity", "value", "error"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    // at p = 2 the sharp constant is the fractional-Laplacian constant
    let kappa: f64 = rows[0][1].parse().unwrap();
    let kbd: f64 = rows[2][1].parse().unwrap();
    assert!((kappa - kbd).abs() < 1e-13);
}

#[test]
fn interval_verify_passes() {
    let v = json(&["verify", "interval", "--p", "2", "--alpha", "1.5", "--battery", "small", "--body", "interval@0,1,2,3", "--json"]);
    assert_eq!(v["result"]["functions"], 6);
    assert_eq!(v["result"]["failures"], 0);
    for row in v["result"]["reports"].as_array().unwrap() {
        assert_eq!(row["verdict"], "pass");
        assert!(row["margin"]["value"].as_f64().unwrap() >= -row["margin"]["error"].as_f64().unwrap());
    }
}

#[test]
fn sweep_alpha_grid_plain() {
    let out = hardy(&["sweep", "alpha-grid", "--p", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("alpha"));
    assert!(text.ends_with("all checks passed\n"));
    assert_eq!(text.lines().count(), 1 + 19 + 1);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("hardy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = ["sweep", "p-grid", "--alpha", "0.7", "--json"];
    let stdout = hardy(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let out = hardy(&with_out);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failed_check_exits_with_one() {
    // listing n in decreasing order makes the gaps increase
    let out = hardy(&["sweep", "extremal", "--p", "2", "--alpha", "1.5", "--n", "64,4", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["result"]["gaps_nonincreasing"], false);
}

#[test]
fn argument_errors_exit_with_two() {
    for args in [
        vec!["constants", "--p", "2", "--alpha", "2.5"],
        vec!["constants", "--p", "2"],
        vec!["constants", "--p", "0.5", "--alpha", "1"],
        vec!["verify", "interval", "--p", "2", "--alpha", "0.8"],
        vec!["verify", "convex", "--p", "2", "--alpha", "1.5", "--body", "torus@1"],
        vec!["sweep", "extremal", "--p", "2", "--alpha", "1.5", "--n", "0"],
        vec!["constants", "--json", "--csv", "--p", "2", "--alpha", "1"],
        vec!["frobnicate"],
    ] {
        let out = hardy(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = hardy(&["verify", "interval", "--p", "2", "--alpha", "0.8"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot hold"));
}

#[test]
fn seeded_json_is_reproducible() {
    let args = ["verify", "convex", "--p", "2", "--alpha", "1.5", "--body", "box@0,0,1,1", "--samples", "20000", "--seed", "11", "--json"];
    let a = hardy(&args);
    let b = hardy(&args);
    assert!(a.status.code().is_some_and(|c| c <= 1));
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    other[10] = "12";
    assert_ne!(hardy(&other).stdout, a.stdout);
}
