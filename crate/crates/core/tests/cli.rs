use std::path::Path;
use std::process::{Command, Output};

use scalekit::catalog;
use serde_json::Value;

fn scalekit() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_scalekit"));
    c.env_remove("SCALEKIT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    scalekit().args(args).output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&o.stderr)))
}

fn assert_error_shape(v: &Value, kind: &str) {
    assert_eq!(v["kind"], kind, "{v}");
    assert!(v["message"].as_str().is_some_and(|m| !m.is_empty()), "{v}");
    assert!(v["context"].is_object(), "{v}");
}

#[test]
fn help_lists_subcommands_and_catalog() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for sub in ["catalog", "eval", "entropy", "transform", "simulate", "invariance", "verify"] {
        assert!(text.contains(sub), "help lacks {sub}");
    }
    for e in catalog::entries() {
        assert!(text.contains(e.name), "help lacks {}", e.name);
    }
    assert!(text.contains("waiting_time_gamma"));
}

#[test]
fn waiting_time_scenario_passes_and_is_reproducible() {
    let args = ["simulate", "waiting_time_gamma", "--n", "100000", "--seed", "42"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let v = stdout_json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["sample_count"], 100_000);
    assert!(v["ks_statistic"].as_f64().unwrap() < v["threshold"].as_f64().unwrap());
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn control_fit_fails() {
    let o = run(&["simulate", "waiting_time_gamma", "--n", "10000", "--control"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["pass"], false);
}

#[test]
fn seed_comes_from_the_environment() {
    let by_flag = run(&["simulate", "maxima_gumbel", "--n", "2000", "--seed", "7"]);
    let by_env = scalekit()
        .args(["simulate", "maxima_gumbel", "--n", "2000"])
        .env("SCALEKIT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(by_flag.stdout, by_env.stdout);
    let other = run(&["simulate", "maxima_gumbel", "--n", "2000", "--seed", "8"]);
    assert_ne!(by_flag.stdout, other.stdout);

    let bad = scalekit()
        .args(["simulate", "maxima_gumbel", "--n", "2000"])
        .env("SCALEKIT_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert_error_shape(&stderr_json(&bad), "UsageError");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["eval", "--dist", "nosuch"][..],
        &["eval", "--dist", "gamma", "--k", "2"],
        &["eval", "--dist", "gamma", "--k", "2", "--alpha", "1", "--lambda", "3"],
        &["simulate", "nosuch"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_error_shape(&stderr_json(&o), "UsageError");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn numeric_errors_exit_1() {
    let o = run(&["eval", "--dist", "pareto_i", "--lambda", "0.5", "--lower", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_error_shape(&stderr_json(&o), "ParameterOutOfDomain");

    // Student's t with λ = 0.4 has a y^{-0.8} tail
    let e = catalog::lookup("generalized_students").unwrap();
    let spec = e.instantiate(&e.setting(0)).unwrap().with_lambda(0.4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    let o = run(&["eval", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stderr_json(&o);
    assert_error_shape(&v, "DivergentIntegral");
    assert_eq!(v["context"]["command"], "eval");

    let o = run(&["eval", "--spec", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_error_shape(&stderr_json(&o), "Io");
}

#[test]
fn eval_csv_is_reproducible() {
    let args = ["eval", "--dist", "gamma", "--k", "2", "--alpha", "1", "--points", "64"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("y,density"));
    assert_eq!(lines.count(), 64);
    assert_eq!(a.stdout, run(&args).stdout);
}

fn eval_to(path: &Path, dist: &[&str]) -> Output {
    let mut args = vec!["eval"];
    args.extend_from_slice(dist);
    args.extend_from_slice(&["--points", "32", "--out", path.to_str().unwrap()]);
    run(&args)
}

#[test]
fn out_file_is_written_whole_or_not_at_all() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("density.csv");
    let good = ["--dist", "exponential", "--lambda", "1"];
    let o = eval_to(&path, &good);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    let mut args = vec!["eval"];
    args.extend_from_slice(&good);
    args.extend_from_slice(&["--points", "32"]);
    assert_eq!(written, run(&args).stdout);

    // a failing run leaves the previous file untouched and no stray temp files
    let o = eval_to(&path, &["--dist", "pareto_i", "--lambda", "0.5", "--lower", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read(&path).unwrap(), written);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let o = eval_to(&dir.path().join("no/such/dir/x.csv"), &good);
    assert_eq!(o.status.code(), Some(1));
    assert_error_shape(&stderr_json(&o), "Io");
}

#[test]
fn verify_reports_pass() {
    let o = run(&["verify", "gumbel"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), catalog::lookup("gumbel").unwrap().settings.len());
    assert!(rows.iter().all(|r| r["pass"] == true), "{v}");
}

#[test]
fn invariance_subcommand() {
    let o = run(&["invariance", "--scale", "log", "--transform", "power:3,2.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["is_invariant"], true);
    let o = run(&["invariance", "--scale", "log", "--transform", "shift:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["is_invariant"], false);
}
