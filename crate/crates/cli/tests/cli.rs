use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn sheafdyn(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheafdyn"))
        .arg("--config")
        .arg(config)
        .args(args)
        .env_remove("SHEAFDYN_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn shipped(name: &str) -> PathBuf {
    configs().join(format!("{name}.json"))
}

#[test]
fn cohomology_of_the_pitchfork() {
    let v = json(&sheafdyn(&shipped("pitchfork"), &["cohomology"]));
    assert_eq!((v["H0"].as_u64(), v["H1"].as_u64()), (Some(3), Some(0)));
    let free = json(&sheafdyn(&shipped("pitchfork"), &["--functor", "free", "cohomology"]));
    assert_eq!(free["functor"], "free");
}

#[test]
fn relative_right_ray_on_the_saddle_node() {
    let v = json(&sheafdyn(
        &shipped("saddle-node"),
        &["relative", "--sub", "right-ray 1.0"],
    ));
    assert_eq!((v["H0"].as_u64(), v["H1"].as_u64()), (Some(0), Some(1)));
}

#[test]
fn pitchfork_lattice_left_of_the_bifurcation() {
    let v = json(&sheafdyn(&shipped("pitchfork"), &["lattice", "--lambda", "-1"]));
    assert_eq!(v["size"], 5);
    assert_eq!(v["validation"]["valid"], true);
}

#[test]
fn classify_and_invariance() {
    let v = json(&sheafdyn(&shipped("saddle-node"), &["classify", "--at", "0"]));
    assert_eq!(v["name"], "saddle-node");
    let v = json(&sheafdyn(
        &shipped("transcritical"),
        &["invariance", "--transform", "shift=0,0.5 reparam=0,-1"],
    ));
    assert_eq!(v["invariant"], true);
    let none = sheafdyn(&shipped("saddle-node"), &["classify", "--at", "1.5", "--window", "0.2"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"system": {}, "parameter": {}, "surprise": 1}"#).unwrap();
    assert_eq!(sheafdyn(&bad, &["cohomology"]).status.code(), Some(2));
    assert_eq!(
        sheafdyn(&dir.path().join("missing.json"), &["cohomology"])
            .status
            .code(),
        Some(2)
    );
    let sub = sheafdyn(&shipped("pitchfork"), &["relative", "--sub", "sideways 1"]);
    assert_eq!(sub.status.code(), Some(2));
    let t = sheafdyn(&shipped("pitchfork"), &["invariance", "--transform", "reparam=0,0,1"]);
    assert_eq!(t.status.code(), Some(2));
}

#[test]
fn resolution_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(shipped("pitchfork")).unwrap()).unwrap();
    v["system"]["field"]["polynomial"] = serde_json::json!([[0], [0, 1]]);
    let path = dir.path().join("degenerate.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let out = sheafdyn(&path, &["portrait", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = sheafdyn(&shipped("stable"), &["--out-dir", blocker.to_str().unwrap(), "report"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stable_report_has_no_bifurcations() {
    let v = json(&sheafdyn(&shipped("stable"), &["report"]));
    assert_eq!(v["bifurcations"].as_array().map(Vec::len), Some(0));
    assert_eq!(v["functors"]["boolean"]["cohomology"]["H1"], 0);
}

#[test]
fn s_shaped_report_files_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let listing = json(&sheafdyn(
            &shipped("s-shaped"),
            &["--out-dir", d.path().to_str().unwrap(), "report"],
        ));
        assert_eq!(listing["written"].as_array().unwrap().len(), 4);
    }
    for name in [
        "s-shaped.report.json",
        "s-shaped.sheaf.dot",
        "s-shaped.hasse.dot",
        "s-shaped.bifurcations.csv",
    ] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let report: Value = serde_json::from_slice(&std::fs::read(a.path().join("s-shaped.report.json")).unwrap()).unwrap();
    assert_eq!(report["bifurcations"].as_array().unwrap().len(), 2);
    for f in ["boolean", "free"] {
        assert!(report["functors"][f]["cohomology"]["H0"].is_u64());
    }
    let csv = std::fs::read_to_string(a.path().join("s-shaped.bifurcations.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn embedded_config_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = sheafdyn(&shipped("compact-s-shaped"), &["report"]);
    let report = json(&first);
    let embedded = dir.path().join("embedded.json");
    std::fs::write(&embedded, report["config"].to_string()).unwrap();
    let second = sheafdyn(&embedded, &["report"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_sheafdyn"))
            .args(["--config", shipped("s-shaped").to_str().unwrap(), "report"])
            .env("SHEAFDYN_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn side_files_follow_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    json(&sheafdyn(
        &shipped("pitchfork"),
        &["--out-dir", d, "lattice", "--lambda", "1"],
    ));
    json(&sheafdyn(&shipped("pitchfork"), &["--out-dir", d, "bifurcations"]));
    json(&sheafdyn(&shipped("pitchfork"), &["--out-dir", d, "sheaf"]));
    for name in [
        "pitchfork.lattice.json",
        "pitchfork.lattice.dot",
        "pitchfork.bifurcations.json",
        "pitchfork.bifurcations.csv",
        "pitchfork.sheaf.json",
        "pitchfork.sheaf.dot",
    ] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let dot = std::fs::read_to_string(dir.path().join("pitchfork.lattice.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}
