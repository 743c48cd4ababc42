//! The interface contract: exit codes, structured errors, file output,
//! and the documented example invocations.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hida")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary invocation works")
}

fn stderr_json(output: &Output) -> serde_json::Value {
    let text = String::from_utf8(output.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|e| {
        panic!("stderr is not one JSON document ({e}): {text}");
    })
}

fn write_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_two_with_help_text() {
    for bad in [
        vec!["no-such-command"],
        vec!["probe-zero-divisor", "--bogus"],
        vec!["solve-gbm"], // missing required flags
    ] {
        let output = run(&bad);
        assert_eq!(output.status.code(), Some(2), "args: {bad:?}");
        assert!(output.stdout.is_empty());
        assert!(!output.stderr.is_empty());
    }
}

#[test]
fn validation_errors_exit_one_with_structured_json() {
    let output = run(&[
        "probe-zero-divisor", "--N", "40", "--D", "5", "--trials", "5", "--seed", "1",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
    let doc = stderr_json(&output);
    assert_eq!(doc["code"], "invalid_config");
    assert_eq!(doc["context"]["subcommand"], "probe-zero-divisor");
    assert!(doc["message"].as_str().unwrap().contains("--N"));
}

#[test]
fn missing_input_file_reports_io_error_with_path() {
    let output = run(&["s-eval", "--in", "/nonexistent/nothing.json", "--at", "1"]);
    assert_eq!(output.status.code(), Some(1));
    let doc = stderr_json(&output);
    assert_eq!(doc["code"], "io_error");
    assert_eq!(doc["context"]["path"], "/nonexistent/nothing.json");
}

#[test]
fn zero_threads_is_a_validation_error() {
    let output = run(&["hermite", "--n", "2", "--threads", "0"]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stderr_json(&output)["code"], "invalid_config");
}

#[test]
fn hermite_example_prints_the_classic_polynomial() {
    let output = run(&["hermite", "--n", "3"]);
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "x^3 - 3*x\n");
}

#[test]
fn probe_example_reports_zero_products_found() {
    let output = run(&[
        "probe-zero-divisor", "--N", "3", "--D", "5", "--trials", "100", "--seed", "7",
    ]);
    assert!(output.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("stdout is JSON");
    assert_eq!(doc["zero_products_found"], 0);
    assert_eq!(doc["failures"], 0);
}

#[test]
fn gbm_example_second_moment_is_near_e() {
    let output = run(&[
        "solve-gbm", "--T", "1", "--M", "32", "--degree", "10", "--method", "closed_form",
        "--mc-samples", "0", "--seed", "1",
    ]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let second = doc["second_moment"].as_f64().unwrap();
    assert!((second - std::f64::consts::E).abs() < 1e-7);
}

#[test]
fn convert_is_idempotent_and_canonicalizes_term_order() {
    let dir = tempfile::tempdir().unwrap();
    // Terms deliberately out of canonical order, alpha pairs reversed.
    let messy = write_file(
        dir.path(),
        "messy.json",
        r#"{"dim":2,"max_degree":3,"terms":[
            {"alpha":[[1,2],[0,1]],"re":0.5,"im":0.0},
            {"alpha":[],"re":1.0,"im":-0.25}]}"#,
    );
    let first = run(&["convert", "--in", &messy]);
    assert!(first.status.success());
    let canonical = write_file(
        dir.path(),
        "canonical.json",
        String::from_utf8(first.stdout.clone()).unwrap().trim_end(),
    );
    let second = run(&["convert", "--in", &canonical]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout, "one pass reaches the fixed point");
    let text = String::from_utf8(first.stdout).unwrap();
    let constant = text.find(r#""alpha":[]"#).unwrap();
    let mixed = text.find(r#""alpha":[[0,1],[1,2]]"#).unwrap();
    assert!(constant < mixed, "terms are in graded order: {text}");
}

#[test]
fn convert_errors_name_the_offending_term() {
    let dir = tempfile::tempdir().unwrap();
    let duplicate = write_file(
        dir.path(),
        "dup.json",
        r#"{"dim":1,"max_degree":2,"terms":[
            {"alpha":[[0,1]],"re":1.0,"im":0.0},
            {"alpha":[[0,1]],"re":2.0,"im":0.0}]}"#,
    );
    let output = run(&["convert", "--in", &duplicate]);
    assert_eq!(output.status.code(), Some(1));
    let doc = stderr_json(&output);
    assert_eq!(doc["code"], "invalid_expansion");
    let message = doc["message"].as_str().unwrap();
    assert!(message.contains("term 1") && message.contains("duplicate"), "{message}");

    let over = write_file(
        dir.path(),
        "over.json",
        r#"{"dim":1,"max_degree":2,"terms":[{"alpha":[[0,3]],"re":1.0,"im":0.0}]}"#,
    );
    let output = run(&["convert", "--in", &over]);
    assert_eq!(output.status.code(), Some(1));
    let message = stderr_json(&output)["message"].as_str().unwrap().to_string();
    assert!(message.contains("term 0") && message.contains("exceeds"), "{message}");
}

#[test]
fn out_files_match_stdout_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let on_stdout = run(&[
        "solve-gbm", "--T", "1", "--M", "4", "--degree", "5", "--method", "closed_form",
        "--mc-samples", "100", "--seed", "9",
    ]);
    assert!(on_stdout.status.success());

    let out_path = dir.path().join("report.json");
    let csv_path = dir.path().join("mass.csv");
    let to_file = run(&[
        "solve-gbm", "--T", "1", "--M", "4", "--degree", "5", "--method", "closed_form",
        "--mc-samples", "100", "--seed", "9",
        "--out", out_path.to_str().unwrap(),
        "--csv", csv_path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty(), "--out silences standard output");

    let report = std::fs::read(&out_path).unwrap();
    assert_eq!(report, on_stdout.stdout, "file bytes equal stdout bytes");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("degree,l2_mass\n0,"), "{csv}");
    assert_eq!(csv.lines().count(), 7, "header plus degrees 0..=5");
}

#[test]
fn growth_csv_lists_one_row_per_radius() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("samples.csv");
    let output = run(&[
        "check-growth", "--form", "gaussian_kernel_s", "--xi", "1", "--p", "0",
        "--radii", "0.5,1,2,4", "--csv", csv_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["report"]["verdict"], "bounded");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next(), Some("r,m_r"));
    assert_eq!(csv.lines().count(), 5, "header plus four radii");
}

#[test]
fn quadrature_flag_demands_real_points() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = write_file(
        dir.path(),
        "e.json",
        r#"{"dim":1,"max_degree":2,"terms":[{"alpha":[[0,2]],"re":0.5,"im":0.0}]}"#,
    );
    let output = run(&["s-eval", "--in", &fixture, "--at", "1+2i", "--quadrature"]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stderr_json(&output)["code"], "invalid_config");
}

#[test]
fn hs_demo_default_grid_reports_exact_isometry() {
    let output = run(&["hs-demo", "--seed", "123"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["exact_match"], true);
    assert_eq!(doc["difference"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 16);
}
