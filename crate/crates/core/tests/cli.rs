use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::tempdir;

fn srwalk(dir: &Path, args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_srwalk"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("SRWALK_THREADS")
        .status()
        .expect("binary runs");
    status.code().expect("exit code")
}

fn report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn report_has_required_fields() {
    let dir = tempdir().unwrap();
    assert_eq!(srwalk(dir.path(), &["erw-moments", "--r", "0.8", "--n-max", "200"]), 0);
    let doc = report(dir.path(), "erw-moments");
    for key in ["command", "params", "seed", "statistics", "criteria", "files", "wall_time_s"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["params"]["n_max"], 200);
    let c = &doc["criteria"]["closed_form_relative_error"];
    assert_eq!(c["passed"], true);
    for file in doc["files"].as_array().unwrap() {
        assert!(dir.path().join(file.as_str().unwrap()).exists());
    }
    let csv = std::fs::read_to_string(dir.path().join("erw-moments_moments.csv")).unwrap();
    assert!(csv.starts_with("n,second,fourth,second_closed\n1,1.0,1.0,"));
    assert_eq!(csv.lines().count(), 201);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let args = [
        "percolation-check", "--p", "0.6", "--r", "0.7", "--n", "3000", "--replicates", "20", "--steps", "gaussian",
        "--seed", "9",
    ];
    let mut docs = Vec::new();
    let mut csvs = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempdir().unwrap();
        let mut a = args.to_vec();
        a.extend(["--threads", threads]);
        assert_eq!(srwalk(dir.path(), &a), 0);
        let mut doc = report(dir.path(), "percolation-check");
        doc.as_object_mut().unwrap().remove("wall_time_s");
        docs.push(doc);
        csvs.push(std::fs::read_to_string(dir.path().join("percolation-check_frequencies.csv")).unwrap());
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn config_supplies_command_and_flags() {
    let dir = tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"command": "conditions", "scheme": "efron", "n_grid": [50, 200], "replicates": 10}"#).unwrap();
    let cfg = config.to_str().unwrap();
    assert_eq!(srwalk(dir.path(), &["--config", cfg, "--replicates", "12"]), 0);
    let doc = report(dir.path(), "conditions");
    assert_eq!(doc["params"]["n_grid"], serde_json::json!([50, 200]));
    // the command line wins over the config
    assert_eq!(doc["params"]["replicates"], 12);
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    assert_eq!(srwalk(d, &["no-such-command"]), 2);
    assert_eq!(srwalk(d, &["erw-moments"]), 2);
    assert_eq!(srwalk(d, &["--config", "/nonexistent/config.json", "erw-moments", "--r", "0.5"]), 2);
    // divergent series is a numeric error
    assert_eq!(srwalk(d, &["compute-constant", "--alpha", "2", "--p", "0.9", "--r", "1"]), 3);
    assert_eq!(srwalk(d, &["simulate-walk", "--p", "1.5", "--r", "0.5", "--n", "10"]), 3);
    // a threshold nobody can meet is a criterion failure
    assert_eq!(
        srwalk(d, &["verify-clt", "--n", "200", "--replicates", "500", "--ks-threshold", "0"]),
        1
    );
}

#[test]
fn constant_methods_agree() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let value = |method: &str| {
        assert_eq!(srwalk(d, &["compute-constant", "--alpha", "1.5", "--p", "0.5", "--r", "1", "--method", method]), 0);
        report(d, "compute-constant")["statistics"]["value"].as_f64().unwrap()
    };
    let series = value("series");
    let integral = value("integral");
    assert!((series - integral).abs() < 1e-7, "{series} vs {integral}");
}

#[test]
fn spike_counterexample_is_exact() {
    let dir = tempdir().unwrap();
    assert_eq!(srwalk(dir.path(), &["counterexample", "--which", "spike", "--replicates", "200"]), 0);
    let doc = report(dir.path(), "counterexample");
    assert_eq!(doc["criteria"]["normalized_sum_equals_first_step"]["passed"], true);
}

#[test]
fn acceptance_subset_runs() {
    let dir = tempdir().unwrap();
    assert_eq!(srwalk(dir.path(), &["acceptance", "--only", "1,8,9"]), 0);
    let csv = std::fs::read_to_string(dir.path().join("acceptance_criteria.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(srwalk(dir.path(), &["acceptance", "--only", "13"]), 2);
}
