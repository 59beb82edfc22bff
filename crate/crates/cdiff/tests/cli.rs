use std::process::{Command, Output};

use serde_json::Value;

fn cdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiff")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn planar_but_never_apcn_over_f9() {
    let v = json(&cdiff(&["analyze", "--field", "3^2", "--function", "x^2+x^3"]));
    assert_eq!(v["summary"]["planar"], true);
    assert_eq!(v["summary"]["pcn"], Value::Array(vec![]));
    assert_eq!(v["summary"]["apcn"], Value::Array(vec![]));
    for e in v["entries"].as_array().unwrap() {
        if e["c"] != 1 {
            assert!(e["delta"].as_u64().unwrap() >= 3, "{e}");
        }
    }
}

#[test]
fn square_over_prime_field() {
    let v = json(&cdiff(&["analyze", "--field", "5^1", "--function", "x^2"]));
    assert_eq!(v["summary"]["planar"], true);
    assert_eq!(v["summary"]["apcn"], serde_json::json!([0, 2, 3, 4]));
}

#[test]
fn matrix_rows_sum_to_order() {
    let out = cdiff(&["analyze", "--field", "5", "--function", "x^2", "--matrix", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let sum: u32 = row.split(',').skip(1).map(|v| v.parse::<u32>().unwrap()).sum();
        assert_eq!(sum, 5);
    }
}

#[test]
fn syntax_error_reports_position() {
    let out = cdiff(&["analyze", "--field", "3^2", "--function", "x^("]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("configuration error") && err.contains("position 3"), "{err}");
}

#[test]
fn large_field_refused_without_override() {
    let out = cdiff(&["analyze", "--field", "2^13", "--function", "x^3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-large"));
}

#[test]
fn config_file_with_flag_override() {
    let path = std::env::temp_dir().join(format!("cdiff-cli-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"command":"analyze","field":"5^1","function":"x^2","format":"csv"}"#).unwrap();
    let p = path.to_str().unwrap();
    let csv = cdiff(&["--config", p]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("c,delta"), "{}", String::from_utf8_lossy(&csv.stdout));
    let v = json(&cdiff(&["--config", p, "--format", "json"]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 5);
    std::fs::remove_file(path).ok();
}

#[test]
fn construct_apcn_family() {
    let v = json(&cdiff(&["construct", "--theorem", "apcnagw", "--q", "4", "--n", "3", "--phi", "x^2+x", "--g", "x"]));
    assert_eq!(v["properties"]["two_to_one"], true);
    for e in v["classification"].as_array().unwrap() {
        if e["c"] != 1 {
            assert_eq!(e["delta"], 2, "{e}");
        }
    }
}

#[test]
fn failed_hypotheses_are_reported_not_fatal() {
    // x^2 + x is 2-to-1 on F_4, so the permutation family's hypotheses fail.
    let args = ["construct", "--theorem", "pcn1", "--q", "4", "--n", "3", "--phi", "x^2+x", "--no-validate", "--strict"];
    let v = json(&cdiff(&args));
    assert_eq!(v["validation"]["passed"], false);
    assert_eq!(v["properties"]["permutation"], false);
    let refused = cdiff(&args[..args.len() - 2]);
    assert_eq!(refused.status.code(), Some(2));
}

#[test]
fn monomial_sweep_finds_witness() {
    let v = json(&cdiff(&["monomial", "--p", "3", "--h", "3", "--d", "5", "--c", "g", "--rmax", "2"]));
    assert_eq!(v["root_in_fps"], false);
    let exts = v["per_extension"].as_array().unwrap();
    assert!(exts.iter().any(|e| !e["violation_witness"].is_null()));
}

#[test]
fn verify_output_is_independent_of_parallelism() {
    let run = |threads: &str| cdiff(&["verify-theorems", "--suite", "2", "--suite", "9", "--parallelism", threads]).stdout;
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["passed"], true);
}
