//! End-to-end tests of the command-line interface: exit codes, artifact
//! layout, determinism, and config handling.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dplearn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_json(dir: &Path, name: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn params_prints_constants_and_self_check() {
    let out = run(&["params"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for needle in ["switching bound K", "learning rate eta", "epsilon_hat", "self-check"] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn params_artifact_satisfies_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("params-run");
    let out = run(&["params", "--out", out_dir.to_str().unwrap(), "--seed", "11"]);
    assert!(out.status.success());

    let artifact = read_json(&out_dir, "params.json");
    let params = &artifact["params"];
    let eta = params["eta"].as_f64().unwrap();
    let rho = params["rho"].as_f64().unwrap();
    assert!(eta < rho / 2.0);
    assert!(params["switching_bound"].as_u64().unwrap() > 0);
    assert!(artifact["max_residual"].as_f64().unwrap() <= 1e-9);
    assert_eq!(artifact["meta"]["seed"].as_u64(), Some(11));

    // The manifest carries the same metadata triple as every artifact.
    let manifest = read_json(&out_dir, "manifest.json");
    assert_eq!(manifest["seed"].as_u64(), Some(11));
    assert_eq!(manifest["config_hash"], artifact["meta"]["config_hash"]);
    assert!(manifest["version"].as_str().is_some());
}

#[test]
fn zero_noise_winnow_respects_the_classic_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("online-run");
    let out = run(&[
        "online",
        "--algo",
        "winnow",
        "--zero-noise",
        "--seed",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let summary = read_json(&out_dir, "summary.json");
    let mistakes = summary["mistakes"].as_u64().unwrap();
    let bound = summary["mistake_bound"].as_f64().unwrap();
    assert!(
        (mistakes as f64) <= bound,
        "mistakes {mistakes} above the printed bound {bound}"
    );
    assert!(stdout(&out).contains("mistake bound"));

    // The transcript leads with the metadata comment, then the header.
    let transcript = fs::read_to_string(out_dir.join("transcript.csv")).unwrap();
    let mut lines = transcript.lines();
    assert!(lines.next().unwrap().starts_with("# seed=3 "));
    assert_eq!(
        lines.next().unwrap(),
        "round,prediction,label,mistake,update,cumulative_updates"
    );
}

#[test]
fn missing_input_file_leaves_no_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("never-created");
    let out = run(&[
        "reduce",
        "--input",
        dir.path().join("no-such-list.json").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!out_dir.exists(), "output directory must not be created on failure");

    // Same contract for a missing stream file.
    let out2_dir = dir.path().join("also-never-created");
    let out2 = run(&[
        "online",
        "--stream",
        dir.path().join("no-such-stream.csv").to_str().unwrap(),
        "--out",
        out2_dir.to_str().unwrap(),
    ]);
    assert!(!out2.status.success());
    assert!(!out2_dir.exists());
}

#[test]
fn reruns_are_byte_identical_apart_from_the_log() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    for out_dir in [&first, &second] {
        let out = run(&[
            "pac-dl",
            "--trials",
            "2",
            "--seed",
            "99",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }

    let mut names: Vec<String> = fs::read_dir(&first)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"errors.csv".to_string()));
    assert!(names.contains(&"summary.json".to_string()));
    for name in &names {
        if name == "run.log" {
            continue; // the only file allowed to differ (timestamps)
        }
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    fs::write(
        &config_path,
        r#"{"seed": 123, "pac_dl": {"dim": 4, "sample_size": 200, "rule_count": 2}}"#,
    )
    .unwrap();

    // Config alone: the seed comes from the file.
    let from_file = dir.path().join("from-file");
    let out = run(&[
        "pac-dl",
        "--config",
        config_path.to_str().unwrap(),
        "--trials",
        "1",
        "--out",
        from_file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_json(&from_file, "manifest.json")["seed"].as_u64(), Some(123));
    let resolved = read_json(&from_file, "config.json");
    assert_eq!(resolved["dim"].as_u64(), Some(4));
    assert_eq!(resolved["sample_size"].as_u64(), Some(200));

    // A flag beats the file.
    let overridden = dir.path().join("overridden");
    let out = run(&[
        "pac-dl",
        "--config",
        config_path.to_str().unwrap(),
        "--seed",
        "5",
        "--trials",
        "1",
        "--out",
        overridden.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(read_json(&overridden, "manifest.json")["seed"].as_u64(), Some(5));
}

#[test]
fn unknown_config_keys_and_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.json");
    fs::write(&config_path, r#"{"sede": 1}"#).unwrap();
    let out = run(&["params", "--config", config_path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sede"));

    let out = run(&["params", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2), "usage errors exit with 2");
}

#[test]
fn audit_subcommand_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("audit-run");
    let out = run(&[
        "audit",
        "--suite",
        "em-select",
        "--trials",
        "40000",
        "--seed",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = read_json(&out_dir, "report.json");
    let verdict = report["verdict"].as_str().unwrap();
    assert_ne!(verdict, "fail");
    for field in ["statistic", "bound", "ci"] {
        assert!(report[field].is_number(), "report is missing {field}");
    }
    assert_eq!(report["seed"].as_u64(), Some(2));
    assert_eq!(report["trials"].as_u64(), Some(40000));
    assert!(stdout(&out).contains("verdict"));
}

#[test]
fn oracle_subcommand_finds_the_minimum() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("oracle-run");
    let out = run(&["oracle", "--seed", "6", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = read_json(&out_dir, "report.json");
    // The generated sample is realizable, so the exhaustive minimum is zero.
    assert_eq!(report["min_error"].as_u64(), Some(0));
    assert!(report["search_space"].as_u64().unwrap() > 0);

    let list = read_json(&out_dir, "best_list.json");
    assert!(list["terms"].is_array());
    assert!(out_dir.join("sample.csv").exists());
}

#[test]
fn workers_flag_is_accepted() {
    let out = run(&["params", "--workers", "2"]);
    assert!(out.status.success());
}
