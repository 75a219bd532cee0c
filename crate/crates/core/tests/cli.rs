use std::ffi::OsString;

use gaussian_iso::cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use gaussian_iso::verify::VerificationReport;
use serde_json::Value;

fn call<S: AsRef<str>>(args: &[S]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once(OsString::from("gaussian-iso")).chain(args.iter().map(|a| OsString::from(a.as_ref())));
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn eval_half_space_has_no_deficit_or_asymmetry() {
    let (code, out, _) = call(&["eval", "--set", r#"{"type":"halfspace","omega":[1],"s":-1}"#]);
    assert_eq!(code, EXIT_OK);
    let q: Value = serde_json::from_str(&out).unwrap();
    assert!(q["deficit"].as_f64().unwrap().abs() < 1e-15);
    assert!(q["beta"].as_f64().unwrap().abs() < 1e-15);
    assert!((q["s"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn eval_reads_descriptor_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.json");
    std::fs::write(&path, r#"{"type":"intervals","items":[["-inf",-1.2],[1.2,"inf"]]}"#).unwrap();
    let (code, out, _) = call(&["eval".to_string(), "--set".to_string(), format!("@{}", path.display())]);
    assert_eq!(code, EXIT_OK);
    let q: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(q["barycenter"][0].as_f64().unwrap(), 0.0);
    assert!(q["deficit"].as_f64().unwrap() > 0.0);
}

#[test]
fn malformed_input_is_a_usage_error() {
    for args in [
        vec!["eval", "--set", "{not json"],
        vec!["eval", "--set", r#"{"type":"ball","dim":0,"radius":1}"#],
        vec!["eval", "--set", "@/nonexistent/set.json"],
        vec!["verify", "--suite", "nonsense", "--samples", "10"],
        vec!["verify", "--format", "xml"],
        vec!["minimize", "--s", "-1", "--eps", "-3"],
        vec!["sweep", "--s-list", "-3,1"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let base = ["verify", "--suite", "iso", "--samples", "300", "--seed", "5", "--out"];
    let with = |p: &std::path::Path, fmt: &str| {
        let mut v: Vec<String> = base.iter().map(|s| s.to_string()).collect();
        v.extend([p.display().to_string(), "--format".into(), fmt.into()]);
        v
    };
    let (code, out, err) = call(&with(&json, "json"));
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(err.contains("isoperimetric"));
    let report = VerificationReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!((report.suite.as_str(), report.seed, report.samples), ("iso", 5, 300));
    assert!(report.passed());

    assert_eq!(call(&with(&csv, "csv")).0, EXIT_OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,anchor,samples,violations,worst_margin,seed,wall_time"));
    assert_eq!(lines.count(), report.checks.len());
}

#[test]
fn too_small_constant_exits_with_violation() {
    let (code, out, err) = call(&["verify", "--suite", "main", "--samples", "300", "--constant", "0.5"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(err.contains("FAILED"));
    let report = VerificationReport::from_json(&out).unwrap();
    assert!(report.check("stability-inequality").unwrap().violations > 0);
}

#[test]
fn verify_output_is_reproducible_across_job_counts() {
    let args = |jobs: &str| {
        ["verify", "--suite", "main", "--samples", "400", "--seed", "11", "--jobs", jobs].map(String::from)
    };
    let (_, one, _) = call(&args("1"));
    let (_, four, _) = call(&args("4"));
    let strip = |s: &str| VerificationReport::from_json(s).unwrap().without_timings();
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn minimize_reports_the_half_line() {
    let (code, out, _) =
        call(&["minimize", "--s", "-0.5", "--eps", "default", "--lambda", "default", "--kmax", "2", "--starts", "8"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["half_line_is_best"], Value::Bool(true));
    assert_eq!(v["k_max"], 2);
}

#[test]
fn minimize_accepts_explicit_coefficients() {
    let (code, out, _) =
        call(&["minimize", "--s", "0", "--eps", "0.01", "--lambda", "5", "--kmax", "1", "--starts", "4"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["eps"], 0.01);
    assert_eq!(v["lambda"], 5.0);
}

#[test]
fn sweep_rows_are_sorted_by_level() {
    let (code, out, _) = call(&["sweep", "--s-list", "-5 -20,-10"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<Value> = serde_json::from_str(&out).unwrap();
    let levels: Vec<f64> = rows.iter().map(|r| r["s"].as_f64().unwrap()).collect();
    assert_eq!(levels, vec![-20.0, -10.0, -5.0]);
    assert!(rows.iter().all(|r| r["ratio"].as_f64().unwrap() < 2.0));
}
