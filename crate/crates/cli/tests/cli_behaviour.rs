//! End-to-end tests of the binary: flag precedence, diagnostics, exit
//! codes, output formats, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
  Command::new(env!("CARGO_BIN_EXE_argrain"))
}

fn run(args: &[&str]) -> Output {
  bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
  String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
  String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn temp_path(name: &str) -> PathBuf {
  let mut p = std::env::temp_dir();
  p.push(format!("argrain_test_{}_{name}", std::process::id()));
  p
}

#[test]
fn moments_passes_at_reference_point_and_exits_zero() {
  let out = run(&["moments", "--n", "5000", "--seed", "11"]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = stdout(&out);
  assert!(text.contains("[PASS] c_xx"), "stdout: {text}");
  assert!(text.contains("[PASS] c_xy"));
  assert!(text.contains("[PASS] c_yy"));
}

#[test]
fn moments_with_zero_beta_passes_at_zero_cross_covariance() {
  let out = run(&["moments", "--beta", "0", "--n", "5000", "--seed", "12"]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = stdout(&out);
  assert!(text.contains("[PASS] c_xy: "), "stdout: {text}");
  assert!(text.contains("expected 0.000000e0"));
}

#[test]
fn negative_result_reproduces_reference_slopes() {
  let out = run(&[
    "negative-result",
    "--alpha", "0.9", "--beta", "0.5", "--gamma", "0.5",
    "--n", "20000", "--seed", "7",
  ]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = stdout(&out);
  assert!(text.contains("closed-form observational slope a   0.818182"));
  assert!(text.contains("closed-form interventional slope a' 1.000000"));
  assert!(text.contains("[PASS] slopes_differ_beyond_threshold"));
}

#[test]
fn theorem1_mismatch_fails_and_exits_one() {
  let out = run(&[
    "theorem1",
    "--alpha", "0.9", "--beta", "0.5", "--gamma", "0.5",
    "--n", "3000", "--seed", "5", "--mismatch",
  ]);
  assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
  assert!(stdout(&out).contains("[FAIL] interventional_mean_matches_conditional"));
}

#[test]
fn flags_override_config_file_which_overrides_defaults() {
  let cfg = temp_path("precedence.json");
  std::fs::write(&cfg, r#"{"alpha":0.9,"beta":0.25,"n":4}"#).unwrap();
  let out = run(&[
    "simulate",
    "--config", cfg.to_str().unwrap(),
    "--alpha", "0.3",
    "--no-timestamp",
  ]);
  std::fs::remove_file(&cfg).ok();
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = stdout(&out);
  assert!(text.contains("\"alpha\":0.3"), "flag wins: {text}");
  assert!(text.contains("\"beta\":0.25"), "file wins over default: {text}");
  assert!(text.contains("\"gamma\":0.25"), "default survives: {text}");
  assert!(text.contains("\"n\":4"), "file n respected: {text}");
  assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 5);
}

#[test]
fn unknown_config_field_is_named_in_the_diagnostic() {
  let cfg = temp_path("typo.json");
  std::fs::write(&cfg, r#"{"alpa":0.9}"#).unwrap();
  let out = run(&["moments", "--config", cfg.to_str().unwrap()]);
  std::fs::remove_file(&cfg).ok();
  assert_eq!(out.status.code(), Some(3));
  assert!(stderr(&out).contains("unknown field `alpa`"), "stderr: {}", stderr(&out));
}

#[test]
fn invalid_parameter_is_named_and_exits_three() {
  let out = run(&["moments", "--alpha", "1.5"]);
  assert_eq!(out.status.code(), Some(3));
  assert!(stderr(&out).contains("alpha"), "stderr: {}", stderr(&out));

  let out = run(&["frequency-scan", "--nu-grid", "0.0,1.5"]);
  assert_eq!(out.status.code(), Some(3));
  assert!(stderr(&out).contains("nu"), "stderr: {}", stderr(&out));
}

#[test]
fn unknown_flag_exits_three() {
  let out = run(&["moments", "--alhpa", "0.5"]);
  assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_and_version_exit_zero() {
  assert_eq!(run(&["--help"]).status.code(), Some(0));
  assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn simulate_writes_csv_with_provenance_header() {
  let path = temp_path("traj.csv");
  let out = run(&[
    "simulate", "--n", "10", "--seed", "4", "--do-x", "2.0",
    "--out", path.to_str().unwrap(), "--no-timestamp",
  ]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = std::fs::read_to_string(&path).unwrap();
  std::fs::remove_file(&path).ok();
  assert!(text.starts_with("# argrain "));
  assert!(text.contains("# config {\"command\":\"simulate\""));
  assert!(text.contains("\"do_x\":2.0"));
  assert!(text.contains("\nt,x,y\n"));
  // Clamped X column: every x equals the intervention value.
  for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with('t')) {
    let x: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(x, 2.0);
  }
}

#[test]
fn frequency_scan_emits_the_pinned_columns() {
  let out = run(&[
    "frequency-scan", "--nu-grid", "0.0,0.25", "--T", "50", "--no-timestamp",
  ]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let text = stdout(&out);
  let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
  assert_eq!(
    header,
    "nu,T,transfer_re,transfer_im,actual_error,tight_bound,paper_bound,asym_var_y,\
     asym_var_x_printed,asym_var_x_numeric,pseudo_var_abs"
  );
  assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn identical_configs_give_byte_identical_files() {
  let scan = temp_path("scan.csv");
  let cross = temp_path("cross.csv");
  let args = [
    "frequency-scan",
    "--nu-grid", "0.0,0.1,0.25",
    "--T", "50,200",
    "--no-timestamp",
    "--out", scan.to_str().unwrap(),
    "--cross-out", cross.to_str().unwrap(),
  ];
  assert_eq!(run(&args).status.code(), Some(0));
  let scan1 = std::fs::read(&scan).unwrap();
  let cross1 = std::fs::read(&cross).unwrap();
  assert_eq!(run(&args).status.code(), Some(0));
  let scan2 = std::fs::read(&scan).unwrap();
  let cross2 = std::fs::read(&cross).unwrap();
  std::fs::remove_file(&scan).ok();
  std::fs::remove_file(&cross).ok();
  assert_eq!(scan1, scan2);
  assert_eq!(cross1, cross2);

  let report = temp_path("report.json");
  let args = [
    "theorem1", "--n", "500", "--seed", "2", "--no-timestamp",
    "--out", report.to_str().unwrap(),
  ];
  let first = run(&args);
  let json1 = std::fs::read(&report).unwrap();
  let second = run(&args);
  let json2 = std::fs::read(&report).unwrap();
  std::fs::remove_file(&report).ok();
  assert_eq!(first.status.code(), second.status.code());
  assert_eq!(json1, json2);
}

#[test]
fn timestamp_is_the_only_nondeterministic_line() {
  let path = temp_path("stamped.csv");
  let args = ["simulate", "--n", "5", "--seed", "8", "--out", path.to_str().unwrap()];
  assert_eq!(run(&args).status.code(), Some(0));
  let first = std::fs::read_to_string(&path).unwrap();
  assert_eq!(run(&args).status.code(), Some(0));
  let second = std::fs::read_to_string(&path).unwrap();
  std::fs::remove_file(&path).ok();
  assert!(first.contains("# generated_unix "));
  let strip = |s: &str| {
    s.lines()
      .filter(|l| !l.starts_with("# generated_unix "))
      .collect::<Vec<_>>()
      .join("\n")
  };
  assert_eq!(strip(&first), strip(&second));
}

#[test]
fn json_report_embeds_version_and_config() {
  let path = temp_path("moments.json");
  let out = run(&[
    "moments", "--n", "500", "--seed", "3", "--no-timestamp",
    "--out", path.to_str().unwrap(),
  ]);
  assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
  let doc: serde_json::Value =
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
  std::fs::remove_file(&path).ok();
  assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
  assert_eq!(doc["config"]["command"], "moments");
  assert_eq!(doc["config"]["n"], 500);
  assert!(doc["results"]["checks"].as_array().unwrap().len() == 5);
  assert!(doc.get("generated_unix").is_none());
}
