//! End-to-end runs of the binary: exit codes, formats and reproducibility.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

const EXAMPLE_LAMBDA: &str = "6,6,5,3,3,2,1,0";
const EXAMPLE_MU: &str = "6,5,4,3,3,1,1";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interlacing-nf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_worked_example() {
    let out = run(&[
        "analyze",
        "--lambda",
        EXAMPLE_LAMBDA,
        "--mu",
        EXAMPLE_MU,
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tool"], "interlacing-nf");
    assert_eq!(v["passed"], true);
    let r = &v["report"];
    assert_eq!(r["pattern"]["m_labels"], serde_json::json!(["4", "1"]));
    assert_eq!(r["pattern"]["p_labels"], serde_json::json!(["5", "3"]));
    assert_eq!(r["l_group"], "U(1) × U(1) × 1 × U(2) × U(1)");
    assert_eq!(r["dimensions"]["dim_orbit"], 52);
    assert_eq!(r["normal_form"]["c"], "3");
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["passed"], true, "{c}");
    }
}

#[test]
fn input_validation_exits_1() {
    let out = run(&["analyze", "--lambda", "3,2,1", "--mu", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length mismatch"));
    assert!(out.stdout.is_empty());

    let out = run(&["analyze", "--lambda", "3,2,1", "--mu", "1,2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["analyze", "--lambda", "3,2,1", "--mu", "4,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_1 >= mu_1"));

    assert_eq!(
        run(&["analyze", "--lambda", "1,0", "--mu", "1/0"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["analyze", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "--lambda", "1,0", "--mu", "1", "--tol", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn negative_and_fractional_inline_values() {
    let out = run(&["analyze", "--lambda", "-1/2,-1/2,-3", "--mu", "-1/2,-2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn input_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"lambda": ["2", "1", "0"], "mu": ["1", "1"]}}"#).unwrap();
    let path = f.path().to_str().unwrap();
    let out = run(&["analyze", "--input", path, "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("W = {0}\n"), "{text}");
    assert!(text.contains("overall: PASS"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"lambda": ["2", "1", "0"], "mu": ["3", "1"]}}"#).unwrap();
    let out = run(&["verify", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        run(&["verify", "--input", "/nonexistent/pair.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_passes_and_is_reproducible() {
    let args = [
        "verify",
        "--lambda",
        EXAMPLE_LAMBDA,
        "--mu",
        EXAMPLE_MU,
        "--tol",
        "1e-8",
        "--seed",
        "42",
        "--samples",
        "10",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["report"]["samples"].as_array().unwrap().len(), 10);
    let other = run(&["verify", "--lambda", EXAMPLE_LAMBDA, "--mu", EXAMPLE_MU, "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn tolerance_below_precision_fails() {
    let out = run(&[
        "verify",
        "--lambda",
        EXAMPLE_LAMBDA,
        "--mu",
        EXAMPLE_MU,
        "--tol",
        "1e-16",
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    let eig = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "eigenvalues")
        .unwrap();
    assert_eq!(eig["status"], "fail");
}

#[test]
fn zero_samples_skip_sampling() {
    let out = run(&[
        "verify",
        "--lambda",
        EXAMPLE_LAMBDA,
        "--mu",
        EXAMPLE_MU,
        "--samples",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["report"]["samples"].as_array().unwrap().is_empty());
    for c in v["report"]["checks"].as_array().unwrap() {
        if c["name"].as_str().unwrap().starts_with("sample_") {
            assert_eq!(c["status"], "skipped");
        }
    }
}

#[test]
fn verify_lagrangian_skips_form_check() {
    let out = run(&["verify", "--lambda", "2,1,0", "--mu", "1,1", "--sample-slices"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let form = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "symplectic_form")
        .unwrap();
    assert_eq!(form["status"], "skipped");
}

#[test]
fn faces_examples() {
    let v = json(&run(&["faces", "--lambda", "2,1,0"]));
    assert_eq!(v["report"]["f_vector"], serde_json::json!([4, 4, 1]));
    assert_eq!(v["report"]["faces"].as_array().unwrap().len(), 9);
    assert_eq!(v["report"]["order_relation"].as_array().unwrap().len(), 12);

    let v = json(&run(&["faces", "--lambda", "1,1"]));
    assert_eq!(v["report"]["faces"].as_array().unwrap().len(), 1);

    let v = json(&run(&["faces", "--lambda", EXAMPLE_LAMBDA]));
    let faces = v["report"]["faces"].as_array().unwrap();
    let top = faces.last().unwrap();
    // the generic μ leaves every non-repeated slot as an isolated bottom vertex
    assert_eq!(top["dimension"], 5);
    let isolated_bottoms = top["shape_signature"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s[0] == "M" && s[1] == 0 && s[2] == 1)
        .count();
    assert_eq!(isolated_bottoms, 5);
    assert_eq!(top["dimensions"]["dim_w"], 0);
}

#[test]
fn faces_bound() {
    let lambda: Vec<String> = (0..14).rev().map(|k| k.to_string()).collect();
    let out = run(&["faces", "--lambda", &lambda.join(",")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration bound"));
}
