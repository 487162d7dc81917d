use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodgelab"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn majorant_subcommand_writes_catalan_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["majorant", "--c", "1", "--x1", "1", "--order", "50", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("majorant.csv")).unwrap();
    let xs: Vec<&str> = csv.lines().skip(1).take(5).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(xs, ["1", "1", "2", "5", "14"]);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["anchor"].is_string()));
}

#[test]
fn zero_band_limit_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"geometry":{"n":2,"K":0,"oversample":2},"experiment":"kuranishi"}"#);
    let out_dir = dir.path().join("out");
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn unreadable_config_and_bad_threads_exit_two() {
    let out = bin().args(["run", "--config", "/nonexistent/config.json", "--out", "/tmp/x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .env("HODGELAB_THREADS", "zero")
        .args(["majorant", "--c", "1", "--x1", "1", "--order", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"geometry":{"n":2,"K":2,"oversample":2},"experiment":"quasi-isometry","instances":4,
            "tolerances":{"fourTermIdentity":0}}"#,
    );
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(1), "{stdout}");
    assert!(stdout.lines().any(|l| l.starts_with("FAIL quasi-isometry/four-term-identity")));
}

#[test]
fn harmonic_kuranishi_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"geometry":{"n":2,"K":3,"oversample":2},"experiment":"kuranishi",
            "seed":{"kind":"harmonic-constant","rngSeed":4,"targetC1Norm":0.5},"order":3,"parameters":2}"#,
    );
    let mut reports = Vec::new();
    for run in ["a", "b"] {
        let o = dir.path().join(run);
        let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&o).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(o.join("report.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        reports.push(v);
        assert!(o.join("kuranishi.csv").exists());
    }
    assert_eq!(reports[0], reports[1]);
}
