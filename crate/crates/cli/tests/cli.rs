use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffwaring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn thresholds_table() {
    let v = json(&["thresholds", "--p", "3", "--kmin", "3", "--kmax", "10"]);
    let rows = v["result"].as_array().unwrap();
    let ks: Vec<u64> = rows.iter().map(|r| r["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, vec![4, 5, 7, 8, 10]);
    assert_eq!(rows[0]["s1"], 21);
    assert_eq!(rows[4]["delta0"], "1/176");

    let v = json(&["thresholds", "--p", "2", "--kmin", "3", "--kmax", "3"]);
    assert_eq!(v["result"][0]["s1"], 17);
    assert_eq!(v["result"][0]["case_tag"], "k=p^b+1");

    let v = json(&["thresholds", "--p", "3", "--kmin", "2", "--kmax", "2"]);
    assert_eq!(
        v["result"][0]["G_bound"]
            .as_i64()
            .or(v["result"][0]["g_bound"].as_i64()),
        Some(5)
    );
}

#[test]
fn composite_characteristic_is_a_user_error() {
    let out = run(&["thresholds", "--p", "6", "--kmin", "3", "--kmax", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn csv_thresholds_have_fixed_columns() {
    let out = run(&[
        "thresholds",
        "--p",
        "5",
        "--kmin",
        "3",
        "--kmax",
        "7",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("p,k,case,b,m,j0,"));
    assert!(body
        .iter()
        .any(|l| l.starts_with("5,7,") && l.contains(",79,")));
}

#[test]
fn count_methods_agree() {
    let v = json(&[
        "count", "--q", "3", "--k", "2", "--s", "2", "--n", "t^2", "--method", "both",
    ]);
    assert_eq!(v["result"][0]["count"], "4");
    assert_eq!(v["result"][1]["count"], "4");
    let v = json(&[
        "count", "--q", "2", "--k", "3", "--s", "4", "--n", "t^3+t", "--method", "both",
    ]);
    assert_eq!(v["result"][0]["count"], v["result"][1]["count"]);
}

#[test]
fn zero_target_rejected() {
    for cmd in ["count", "predict", "compare"] {
        let out = run(&[cmd, "--q", "3", "--k", "2", "--s", "2", "--n", "0"]);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
    }
}

#[test]
fn budget_exceeded_is_a_user_error() {
    let out = run(&[
        "count", "--q", "3", "--k", "2", "--s", "6", "--n", "t^8", "--budget", "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn compare_reports_and_reruns_are_identical() {
    let args = [
        "compare", "--q", "3", "--k", "2", "--s", "5", "--n", "t^4+1", "--G", "2", "--seed", "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["field"]["q"], 3);
    assert_eq!(v["result"]["exact_count"], "58320");
    assert!((v["result"]["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn verify_passes_and_detects_a_corrupted_build() {
    let out = run(&["verify", "--suite", "thresholds"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    let out = run(&["verify", "--suite", "thresholds", "--inject-lucas-fault"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failures: Vec<&str> = v["result"]["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap())
        .collect();
    assert!(failures.contains(&"lucas_vs_bigint"));
}

#[test]
fn verify_counts_suite() {
    let out = run(&["verify", "--suite", "counts", "--threads", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn config_file_supplies_field_and_seed() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    write!(
        cfg,
        r#"{{"field": {{"p": 3, "e": 2, "modulus": "t^2+1"}}, "seed": 42, "budget": 5000000}}"#
    )
    .unwrap();
    let path = cfg.path().to_str().unwrap();
    let v = json(&[
        "count", "--config", path, "--k", "2", "--s", "2", "--n", "t^2",
    ]);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["budget"], 5000000);
    assert_eq!(v["field"]["q"], 9);
    assert_eq!(v["field"]["modulus"], "t^2+1");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"colour": 1}}"#).unwrap();
    let out = run(&[
        "thresholds",
        "--config",
        bad.path().to_str().unwrap(),
        "--p",
        "3",
        "--kmin",
        "3",
        "--kmax",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_from_target_list() {
    let mut targets = tempfile::NamedTempFile::new().unwrap();
    write!(targets, r#"["t^2", "t^4+1", "2*t^2+t"]"#).unwrap();
    let v = json(&[
        "scan-exceptional",
        "--q",
        "3",
        "--k",
        "2",
        "--s",
        "5",
        "--G",
        "2",
        "--targets",
        targets.path().to_str().unwrap(),
    ]);
    assert_eq!(v["result"]["scanned"], 3);
    assert_eq!(v["result"]["N"], 5);
    let v = json(&[
        "scan-exceptional",
        "--q",
        "3",
        "--k",
        "2",
        "--s",
        "5",
        "--N",
        "3",
        "--G",
        "1",
        "--psi",
        "inf",
    ]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 26);
    for r in rows {
        assert_eq!(
            r["violator_flag"].as_bool().unwrap(),
            r["discrepancy_scaled"].as_f64().unwrap() > 0.0
        );
    }
}

#[test]
fn arcs_report_measure() {
    let v = json(&["arcs", "--q", "2", "--k", "3", "--X", "1"]);
    assert_eq!(v["result"]["measure"], "1/2");
    assert_eq!(v["result"]["arcs"].as_array().unwrap().len(), 3);
}

#[test]
fn text_format_and_help() {
    let out = run(&[
        "thresholds",
        "--p",
        "3",
        "--kmin",
        "4",
        "--kmax",
        "4",
        "--format",
        "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# ffwaring"));
    assert!(text.lines().any(|l| l.starts_with("3  4")));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["count", "--q", "3"]).status.code(), Some(1));
}
