//! End-to-end runs of the `eegaug` binary.

use std::path::Path;
use std::process::{Command, Output};

fn eegaug(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eegaug"))
        .args(args)
        .current_dir(cwd)
        .env_remove("EEGAUG_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = eegaug(args, cwd);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn small_dataset(dir: &Path) {
    ok(
        &[
            "synth", "--classes", "2", "--per-class", "20", "--channels", "6", "--samples", "128",
            "--sfreq", "64", "--seed", "7", "-o", "d.eabf",
        ],
        dir,
    );
}

#[test]
fn synth_then_inspect() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "synth", "--classes", "4", "--per-class", "100", "--channels", "22", "--samples",
            "1000", "--sfreq", "250", "--seed", "7", "-o", "d.eabf",
        ],
        dir.path(),
    );
    let text = ok(&["inspect", "-i", "d.eabf"], dir.path());
    assert!(text.contains("windows: 400"));
    assert!(text.contains("channels: 22"));
    assert!(text.contains("samples: 1000"));
    assert!(text.contains("class_counts: 0:100,1:100,2:100,3:100"));
}

#[test]
fn augment_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    ok(&["augment", "-i", "d.eabf", "--preset", "bci", "--seed", "1", "-o", "a.eabf"], dir.path());
    ok(&["augment", "-i", "d.eabf", "--preset", "bci", "--seed", "1", "-o", "b.eabf"], dir.path());
    ok(
        &["--threads", "3", "augment", "-i", "d.eabf", "--preset", "bci", "--seed", "1", "-o", "c.eabf"],
        dir.path(),
    );
    let a = std::fs::read(dir.path().join("a.eabf")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.eabf")).unwrap());
    assert_eq!(a, std::fs::read(dir.path().join("c.eabf")).unwrap());
    assert_ne!(a, std::fs::read(dir.path().join("d.eabf")).unwrap());
}

#[test]
fn policy_file_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let policy = r#"{"seed": 5, "specs": [{"name": "sign-flip", "params": {}, "p_aug": 0.5}]}"#;
    std::fs::write(dir.path().join("p.json"), policy).unwrap();
    ok(&["augment", "-i", "d.eabf", "--policy", "p.json", "--seed", "5", "-o", "a.eabf"], dir.path());
    ok(&["augment", "-i", "d.eabf", "--policy", "p.json", "--seed", "6", "-o", "b.eabf"], dir.path());
    let a = std::fs::read(dir.path().join("a.eabf")).unwrap();
    assert_ne!(a, std::fs::read(dir.path().join("b.eabf")).unwrap());
}

#[test]
fn gridsearch_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let args = [
        "gridsearch", "-i", "d.eabf", "--aug", "gaussian-noise", "--min", "0", "--max", "0.2",
        "--points", "11", "--folds", "10", "--seed", "3", "--epochs", "2", "--steps-per-epoch",
        "10", "-o", "r.csv",
    ];
    ok(&args, dir.path());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "protocol,augmentation,magnitude,fraction,fold,metric,value");
    assert_eq!(lines.count(), 110);
    let json = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["config"]["policy_seed"], 3);
    assert_eq!(v["config"]["grid"].as_array().unwrap().len(), 11);

    let mut threaded = vec!["--threads", "1"];
    threaded.extend_from_slice(&args[..args.len() - 1]);
    threaded.push("r1.csv");
    ok(&threaded, dir.path());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("r1.csv")).unwrap());
    assert_eq!(json, std::fs::read_to_string(dir.path().join("r1.json")).unwrap());
}

#[test]
fn learning_curve_and_per_class_reports() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());
    let common = ["--folds", "4", "--seed", "2", "--epochs", "2", "--steps-per-epoch", "10"];
    let mut lc = vec!["learning-curve", "-i", "d.eabf", "--preset", "sleep", "--fractions", "0.5,1"];
    lc.extend_from_slice(&common);
    lc.extend_from_slice(&["-o", "lc.csv"]);
    ok(&lc, dir.path());
    let csv = std::fs::read_to_string(dir.path().join("lc.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4 * 3);

    let mut pc = vec!["per-class", "-i", "d.eabf", "--preset", "bci"];
    pc.extend_from_slice(&common);
    pc.extend_from_slice(&["-o", "pc.csv"]);
    ok(&pc, dir.path());
    let csv = std::fs::read_to_string(dir.path().join("pc.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2 * 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    small_dataset(dir.path());

    let out = eegaug(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = eegaug(
        &["augment", "-i", "d.eabf", "--preset", "bci", "--policy", "p.json", "--seed", "1", "-o", "x"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let out = eegaug(&["augment", "-i", "d.eabf", "--seed", "1", "-o", "x"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = eegaug(&["inspect", "-i", "missing.eabf"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);

    std::fs::write(dir.path().join("junk.eabf"), b"NOPE").unwrap();
    let out = eegaug(&["inspect", "-i", "junk.eabf"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = eegaug(&["augment", "-i", "d.eabf", "--preset", "eyes", "--seed", "1", "-o", "x"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = eegaug(
        &["gridsearch", "-i", "d.eabf", "--aug", "channels-dropout", "--min", "0", "--max", "2", "--seed", "0", "-o", "r.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}

#[test]
fn help_lists_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["gridsearch", "--help"], dir.path());
    assert!(text.contains("[default: 11]"));
    assert!(text.contains("[default: 10]"));
    let text = ok(&["--help"], dir.path());
    assert!(text.contains("EEGAUG_THREADS"));
}
