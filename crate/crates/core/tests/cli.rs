use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bimanual_core::output::CSV_COLUMNS;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bimanual"));
    cmd.env_remove("BIMANUAL_OUT_DIR");
    cmd
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn edited_fixture(dir: &Path, name: &str, edit: impl Fn(&mut serde_json::Value)) -> PathBuf {
    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(fixture(name)).unwrap()).unwrap();
    edit(&mut doc);
    let path = dir.join("edited.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", fixture("table1_grasp").to_str().unwrap(), "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("table1_grasp_trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    assert_eq!(lines.count(), 2);
    for suffix in ["_report.txt", "_paths.svg", "_errors.svg"] {
        assert!(dir.path().join(format!("table1_grasp{suffix}")).is_file(), "{suffix}");
    }
    assert!(!dir.path().join("table1_grasp.FAILED").exists());
    assert!(stdout(&out).contains("OK"));
}

#[test]
fn steps_override_changes_the_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "run",
            fixture("table1_vertical").to_str().unwrap(),
            "--steps",
            "5",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("table1_vertical_trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("BIMANUAL_OUT_DIR", dir.path())
        .args(["run", fixture("table1_rotation").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("table1_rotation_trajectory.csv").is_file());
}

#[test]
fn unreachable_motion_exits_one_with_a_failure_marker() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_fixture(dir.path(), "table1_vertical", |d| {
        d["motion"]["translation"]["dy"] = 80.into();
    });
    let out_dir = dir.path().join("out");
    let out = bin().arg("run").arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let marker = fs::read_to_string(out_dir.join("table1_vertical.FAILED")).unwrap();
    assert!(marker.starts_with("step "), "{marker}");
    assert!(marker.contains("finger "), "{marker}");
    assert!(out_dir.join("table1_vertical_trajectory.csv").is_file());
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, Box<dyn Fn(&mut serde_json::Value)>); 3] = [
        ("links", Box::new(|d| d["fingers"][1]["links"][1] = (-3).into())),
        ("schema", Box::new(|d| d["schema"] = "bimanual-scenario/0".into())),
        ("unknown", Box::new(|d| d["colour"] = "blue".into())),
    ];
    for (key, edit) in cases {
        let cfg = edited_fixture(dir.path(), "table1_vertical", edit);
        let out = bin()
            .arg("run")
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "{key}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(
            err.contains(key) || key == "unknown" && err.contains("colour"),
            "{key}: {err}"
        );
    }
    let out = bin().args(["run", "/nonexistent/scenario.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validate_reports_the_published_tables() {
    let out = bin().arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("70.7") && text.contains("76.5") && text.contains("81.9") && text.contains("78.7"));
    assert!(text.contains("MISMATCH"));
}

#[test]
fn validate_fails_on_a_perturbed_grasp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = edited_fixture(dir.path(), "table1_grasp", |d| d["contacts"][0][1] = 71.into());
    let out = bin().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn ik_prints_joints_for_both_fingers() {
    let out = bin()
        .args([
            "ik",
            fixture("table1_vertical").to_str().unwrap(),
            "--mode",
            "bracketed",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("finger 1") && text.contains("finger 2"), "{text}");
}

#[test]
fn oracle_compares_against_the_grid() {
    let out = bin()
        .args([
            "oracle",
            fixture("table1_grasp").to_str().unwrap(),
            "--grid",
            "40",
            "--seed",
            "7",
            "--samples",
            "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = bin()
        .args(["oracle", fixture("table1_grasp").to_str().unwrap(), "--grid", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
