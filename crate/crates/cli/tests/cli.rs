use std::process::{Command, Output};

use normcalc::analysis::HolomorphyReport;

fn normcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_step3_json_has_schema_keys() {
    let out = normcalc(&["analyze", "--group", "C", "--a", "2", "--support", "3,-1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "input",
        "strip_log",
        "terminal_case",
        "discrepancies",
        "pole_sets",
        "common_poles",
        "exceptional",
        "verdict",
        "conventions",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let s: Vec<(i64, i64)> = v["exceptional"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["s"]["num"].as_i64().unwrap(), e["s"]["den"].as_i64().unwrap()))
        .collect();
    assert_eq!(s, vec![(0, 1), (1, 2)]);
    assert_eq!(v["conventions"]["form"], "antidiagonal");
    assert_eq!(v["conventions"]["identity_a_shift"], "+(r1-r2)/4");
}

#[test]
fn analyze_json_round_trips_byte_for_byte() {
    let out = normcalc(&["analyze", "--group", "C", "--a", "4", "--support", "9,7,3,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let report: HolomorphyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&report).unwrap()), text);
    // both pairs strip away, leaving the supercuspidal case at a = 4
    assert_eq!(report.strip_log.len(), 2);
    assert!(report.common_poles.is_empty());
}

#[test]
fn analyze_text_and_corank_one() {
    let out = normcalc(&["analyze", "--group", "C", "--a", "4", "--support", "7,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("common poles:  {0}"));
    let out = normcalc(&["analyze", "--group", "B", "--a", "1", "--support", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("CorankOneBase"));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["analyze", "--group", "C", "--a", "2", "--support", "3,0"][..],
        &["analyze", "--group", "C", "--a", "2", "--support", "1,3"],
        &["analyze", "--group", "C", "--a", "2", "--support", "3,1,-1"],
        &["analyze", "--group", "C", "--a", "2", "--support", "3,-3"],
        &["analyze", "--group", "Q", "--a", "2", "--support", ""],
        &["analyze", "--group", "C", "--a", "0", "--support", ""],
        &["weyl", "--group", "U-even", "--n", "2", "--k", "1", "--d", "0", "--way", "12"],
        &["weyl", "--group", "C", "--n", "2", "--k", "3", "--d", "0", "--way", "12"],
        &["weyl", "--group", "C", "--n", "2", "--k", "1", "--d", "0", "--way", "56"],
        &["verify", "nonsense"],
        &["frobnicate"],
    ] {
        let out = normcalc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn parity_error_names_the_condition() {
    let out = normcalc(&["analyze", "--group", "C", "--a", "2", "--support", "3,0"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parity"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["identities", "gl", "step2", "weyl"] {
        let out = normcalc(&["verify", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let text = stdout(&out);
        assert!(text.lines().all(|l| !l.starts_with("[FAIL]")), "{text}");
    }
    let out = normcalc(&["verify", "gl", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["suite"], "gl");
}

#[test]
fn weyl_reports_outcome() {
    let out = normcalc(&["weyl", "--group", "D", "--n", "4", "--k", "2", "--d", "1", "--way", "34", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(["exact", "torus_corrected"].contains(&v["outcome"]["status"].as_str().unwrap()));
    assert_eq!(v["product_preserves_form"], true);
}

#[test]
fn scan_writes_output_file_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("reports.ndjson");
    let spec_path = dir.path().join("spec.json");
    let spec = serde_json::json!({
        "group": "C",
        "a_range": [2, 4],
        "r1_range": [3, 7],
        "r2_range": [-1, 3],
        "straddling_only": true,
        "output": out_path,
    });
    std::fs::write(&spec_path, spec.to_string()).unwrap();
    let out = normcalc(&["scan", "--spec", spec_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = summary["reports"].as_u64().unwrap();
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().count() as u64, reports + 1);
    assert!(written.lines().last().unwrap().starts_with(r#"{"summary":"#));
    let flagged: Vec<(i64, i64, i64)> = summary["exceptional_beyond_zero"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["a"].as_i64().unwrap(), e["r1"].as_i64().unwrap(), e["r2"].as_i64().unwrap()))
        .collect();
    assert_eq!(flagged, vec![(2, 3, -1), (2, 3, 1), (3, 4, 2), (4, 5, 3)]);
}

#[test]
fn scan_errors() {
    let out = normcalc(&["scan", "--spec", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"group":"C","a_range":[5,1],"r1_range":[3,7],"r2_range":[-1,3]}"#).unwrap();
    assert_eq!(normcalc(&["scan", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    let unwritable = dir.path().join("spec.json");
    std::fs::write(
        &unwritable,
        r#"{"group":"C","a_range":[2,2],"r1_range":[3,3],"r2_range":[1,1],"output":"/definitely/not/here/out.ndjson"}"#,
    )
    .unwrap();
    assert_eq!(normcalc(&["scan", "--spec", unwritable.to_str().unwrap()]).status.code(), Some(3));
}
