//! End-to-end tests of the binary: flags, formats, config files, exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sievebound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_exact_extended_example() {
    let out = run(&[
        "eval",
        "--regime",
        "extended",
        "--k",
        "4",
        "--theta",
        "1/2",
        "--poly",
        "12,63,100@1-x",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2977019/51030"), "{text}");
}

#[test]
fn eval_standard_constant_omega() {
    let out = run(&[
        "eval", "--regime", "standard", "--k", "2", "--theta", "1/2", "--poly", "1@x",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("14/3"));
}

#[test]
fn eval_constraint_violation_exits_2() {
    let out = run(&[
        "eval", "--regime", "epsilon", "--k", "2", "--theta", "1/2", "--eps", "1/3", "--poly",
        "1@x",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_rejects_float_theta() {
    let out = run(&[
        "eval", "--regime", "standard", "--k", "2", "--theta", "0.5", "--poly", "1@x",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_table_exits_2() {
    let out = run(&["table", "Z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_degree_zero() {
    let out = run(&[
        "optimize",
        "--regime",
        "standard",
        "--k",
        "2",
        "--theta",
        "1/2",
        "--degree",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let bound = v["results"][0]["value"].as_f64().unwrap();
    assert!((bound - 14.0 / 3.0).abs() < 1e-9);
    let names: Vec<_> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"rho".to_string()));
    assert!(names.iter().any(|n| n.starts_with("witness_c")));
}

#[test]
fn json_schema_and_determinism() {
    let args = [
        "eval", "--regime", "standard", "--k", "3", "--theta", "1/4", "--poly", "1,1@x",
        "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    let mut va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let mut vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    for key in ["command", "params", "results", "provenance", "version", "timestamp"] {
        assert!(va.get(key).is_some(), "missing {key}");
    }
    va.as_object_mut().unwrap().remove("timestamp");
    vb.as_object_mut().unwrap().remove("timestamp");
    assert_eq!(va, vb);
}

#[test]
fn csv_output() {
    let out = run(&[
        "eval", "--regime", "standard", "--k", "2", "--theta", "1/2", "--poly", "1@x",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("name,value,error_bound,method"));
    assert!(text.contains("\r\n"));
}

#[test]
fn config_file_defaults_and_flag_override() {
    let dir = std::env::temp_dir().join("sievebound-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(
        &path,
        "regime = standard\nk = 2\ntheta = 1/2  # conditional\npoly = 1@x\n",
    )
    .unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "eval"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("14/3"));
    // an explicit flag wins over the file value
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "eval",
        "--theta",
        "1/4",
    ]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("14/3"));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_collapse_small_run() {
    let out = run(&[
        "verify", "--suite", "collapse", "--k", "3", "--samples", "5e4", "--seed", "42",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("z ="));
}
