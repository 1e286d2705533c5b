use std::path::{Path, PathBuf};
use std::process::Command;

fn vitals(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_vitals")).args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn design_feed_table() {
    let csv = vitals(&["design-feed", "--z0", "25", "--er", "4.4", "--height", "1.6"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("branch,impedance_ohm,width_mm"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[2][..2], ["Z2", "33.3333333"]);
    assert_eq!(rows[7][..2], ["T", "35.3553391"]);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn simulate_then_reanalyze() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    vitals(&["simulate", config("actuator.toml").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    for f in ["iq.csv", "spectrum.csv", "run.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let iq = std::fs::read_to_string(out.join("iq.csv")).unwrap();
    assert!(iq.starts_with("t_s,i,q\n"));
    assert_eq!(iq.lines().count(), 3001);
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("run.json")).unwrap()).unwrap();
    assert_eq!(meta["command"], "simulate");
    assert_eq!(meta["seed"], 2013);

    let again = dir.path().join("offline");
    let report = vitals(&["spectrum", out.join("iq.csv").to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert!(report.starts_with("peak 0.17"), "{report}");
    let spec = std::fs::read_to_string(again.join("spectrum.csv")).unwrap();
    assert!(spec.starts_with("f_hz,mag,mag_db\n0,"));
}

#[test]
fn physio_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("physio.toml"))
        .unwrap()
        .replace("subjects = 5", "subjects = 1")
        .replace("session_s = 300.0", "session_s = 60.0");
    let cfg = dir.path().join("short.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = dir.path().join("ph");
    vitals(&["physio", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let table = std::fs::read_to_string(out.join("accuracy.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "subject_id,distance_m,config,accuracy_pct");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,0.5,standard,"));
    assert!(lines[2].starts_with("0,0.5,recommended,"));
}

#[test]
fn bad_config_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "trials = 0\n[motion]\nkind = \"sinusoid\"\namplitude_m = 0.02\nperiod_s = 5.8\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vitals"))
        .args(["simulate", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}
