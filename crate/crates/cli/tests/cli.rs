use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_riesz-caps"))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("riesz-caps-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

#[test]
fn newton_distance_prints_golden_ratio() {
    let out = bin().args(["newton-distance", "--d", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.618033988749"), "{text}");
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    assert_eq!(bin().args(["newton-distance", "--d", "1"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["frobnicate"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn malformed_scenario_is_rejected() {
    let dir = scratch_dir("malformed");
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"name": "x", "task": "density", "colour": 3}"#).unwrap();
    let out = run_in(&dir, &["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[usage]"));

    std::fs::write(&path, r#"{"name": "x", "task": "density", "params": {"kernel": "riesz", "d": 2, "s": 3.0},
        "field": {"kind": "charge", "q": 1.0, "height": 1.3}}"#)
        .unwrap();
    let out = run_in(&dir, &["run", path.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn missing_scenario_file_fails() {
    let dir = scratch_dir("missing");
    let out = run_in(&dir, &["run", "does-not-exist.json"]);
    assert!(matches!(out.status.code(), Some(2 | 3)));
}

#[test]
fn solve_support_is_deterministic() {
    let dir = scratch_dir("determinism");
    let sc = scenario("solve_newton.json");
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out_dir = dir.join(format!("run{k}"));
        let out = run_in(&dir, &["run", sc.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut files: Vec<_> = std::fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        assert!(!files.is_empty());
        outputs.push(files.iter().map(|f| std::fs::read(f).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(outputs[0], outputs[1]);
}
