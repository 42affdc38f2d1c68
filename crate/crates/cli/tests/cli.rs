use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn reinhardt(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reinhardt"))
        .args(args)
        .env("REINHARDT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn ok(cache: &Path, args: &[&str]) -> String {
    let out = reinhardt(cache, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(cache: &Path, args: &[&str]) -> Value {
    serde_json::from_str(&ok(cache, args)).unwrap()
}

#[test]
fn count_21_json() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(dir.path(), &["count", "21", "--format", "json"]);
    assert_eq!(text.trim(), r#"{"n":21,"E":10,"E0":10,"E1":0,"E0_formula":10}"#);
    assert!(dir.path().join("reinhardt-21.v1.jsonl").exists());
    let again = ok(dir.path(), &["count", "21", "--format", "json"]);
    assert_eq!(text, again);
}

#[test]
fn count_by_largest_part() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["count", "30", "--format", "json", "--by-largest-part", "--no-cache"]);
    assert_eq!(v["E"], 41);
    assert_eq!(v["E1"], 3);
    let rows = v["by_largest_part"].as_array().unwrap();
    assert_eq!(rows.iter().map(|r| r["E"].as_u64().unwrap()).sum::<u64>(), 41);
    let csv = ok(dir.path(), &["count", "30", "--format", "csv"]);
    assert_eq!(csv, "n,E,E0,E1,E0_formula\n30,41,38,3,38\n");
}

#[test]
fn classify_sporadic_30_gon() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["classify", "[7,6,1,1,1,1,2,1,1,1,1,1,4,1,1]", "--format", "json"]);
    assert_eq!(v["reinhardt"], true);
    assert_eq!(v["classification"], "sporadic");
    assert_eq!(v["n"], 30);
    let text = ok(dir.path(), &["classify", "[(7)^3]"]);
    assert!(text.contains("periodic with periods 7"), "{text}");
    let v = json(dir.path(), &["classify", "[4,4,1]", "--format", "json"]);
    assert_eq!(v["reinhardt"], false);
    assert_eq!(v["classification"], Value::Null);
    assert!(v["closure_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn expand_notation() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ok(dir.path(), &["expand", "[(7)^3]"]), "[7,7,7]\n");
    assert_eq!(ok(dir.path(), &["expand", "[(3,1,1)^3]", "--format", "json"]), "[3,1,1,3,1,1,3,1,1]\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| reinhardt(dir.path(), args).status.code().unwrap();
    assert_eq!(code(&["count", "21", "--frobnicate"]), 2);
    assert_eq!(code(&["classify", "[3,0]"]), 2);
    assert_eq!(code(&["expand", "[(7)^"]), 2);
    assert_eq!(code(&["count", "abc"]), 2);
    assert_eq!(code(&["--format", "xml", "count", "21"]), 2);
    assert_eq!(code(&["count", "16"]), 1);
    assert_eq!(code(&["construct", "31"]), 1);
    assert_eq!(code(&["construct", "30", "--p", "3", "--q", "5", "--r", "3"]), 1);
    assert_eq!(code(&["render", "[4,4,1]", "-o", "x.svg"]), 1);
    let out = reinhardt(dir.path(), &["enumerate", "45", "--budget", "1000", "--no-cache"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("over the budget"));
}

#[test]
fn enumerate_formats() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["enumerate", "15", "--format", "json"]);
    assert_eq!(v["E"], 5);
    let polys = v["polygons"].as_array().unwrap();
    assert_eq!(polys.len(), 5);
    assert_eq!(polys[4]["composition"], serde_json::json!([5, 5, 5]));
    assert_eq!(polys[4]["classification"]["kind"], "periodic");
    let csv = ok(dir.path(), &["enumerate", "15", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("composition,classification,periods"));
    assert_eq!(lines.count(), 5);
    let text = ok(dir.path(), &["enumerate", "15"]);
    assert!(text.ends_with("n = 15: E = 5, E0 = 5, E1 = 0\n"));
}

#[test]
fn construct_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["construct", "30", "--format", "json"]);
    assert_eq!(v["C"], 3);
    assert_eq!(v["grids"].as_array().unwrap().len(), 2);
    assert_eq!(v["sporadic"].as_array().unwrap().len(), 3);
    let csv = ok(
        dir.path(),
        &["construct", "30", "--p", "3", "--q", "5", "--r", "2", "--count-only", "--format", "csv"],
    );
    assert_eq!(csv, "n,C\n30,3\n");
    let zero = json(dir.path(), &["construct", "45", "--require-zero-in-s", "--count-only", "--format", "json"]);
    assert!(zero["C"].as_u64().unwrap() <= 144);
    assert!(zero.get("sporadic").is_none());
    let text = ok(dir.path(), &["construct", "42", "--all-factorizations", "--count-only"]);
    assert!(text.ends_with("C(42) = 9\n"), "{text}");
}

#[test]
fn decompose_json() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["decompose", "[(3,1,1)^3]", "--p", "3", "--q", "5", "--format", "json"]);
    assert_eq!(v["f1"].as_array().unwrap().len(), 5);
    assert_eq!(v["f2"].as_array().unwrap().len(), 3);
    for c in v["f1"].as_array().unwrap().iter().chain(v["f2"].as_array().unwrap()) {
        assert!(c.as_i64().unwrap().abs() <= 1);
    }
    assert!(v["p_side"].as_bool().unwrap() || v["q_side"].as_bool().unwrap());
    assert_eq!(reinhardt(dir.path(), &["decompose", "[(1)^15]", "--p", "3", "--q", "7"]).status.code(), Some(1));
}

#[test]
fn render_layers() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    let sporadic = "[7,6,1,1,1,1,2,1,1,1,1,1,4,1,1]";
    for path in [&a, &b] {
        ok(dir.path(), &["render", sporadic, "-o", path.to_str().unwrap(), "--layers", "polygon,chords,arcs"]);
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert_eq!(svg.matches("<line").count(), 15);
    assert!(svg.contains("id=\"arcs\""));
    let plain = dir.path().join("c.svg");
    ok(dir.path(), &["render", "[(1)^21]", "-o", plain.to_str().unwrap(), "--size", "300"]);
    let svg = std::fs::read_to_string(&plain).unwrap();
    assert_eq!(svg.matches("<line").count(), 0);
    assert_eq!(svg.matches("<path").count(), 1);
}

#[test]
fn tables_without_computation() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["tables", "--table", "1", "--max-raw", "0", "--budget", "0", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0]["n"], 30);
    assert_eq!(rows[0]["C"], Value::Null);
    let v = json(dir.path(), &["tables", "--table", "1", "--max-raw", "300", "--budget", "0", "--format", "json"]);
    assert_eq!(v[0]["C"], 3);
    let v = json(dir.path(), &["tables", "--table", "2", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 26);
    assert_eq!(rows[25]["C_published"], 36);
    assert_eq!(reinhardt(dir.path(), &["tables", "--table", "3"]).status.code(), Some(2));
}
