use std::process::Command;

fn loopforge() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopforge"))
}

fn config(dir: &std::path::Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("run.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn run_prints_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        r#"{"m": 3, "potential": {"kind": "minimal_np", "pairs": [{"f1": [[1, 0]]}]}, "grid": {"n": 5, "radius": 0.3}}"#,
    );
    let out = loopforge().arg("run").arg(&cfg).arg("--quiet").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "minimal_surface_candidate");
    assert!(out.stderr.is_empty());
}

#[test]
fn threads_flag_and_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"m": 3, "grid": {"n": 3}}"#);
    let a = loopforge().args(["run", "--threads", "3"]).arg(&cfg).output().unwrap();
    let b = loopforge().arg("run").arg(&cfg).env("LOOPFORGE_THREADS", "2").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("verdict: Trivial"));
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), r#"{"m": 3, "grid": {"n": 4}}"#);
    let out = loopforge().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n must be odd"));
    let out = loopforge().args(["run", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cell_boundary_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        r#"{"m": 3, "potential": {"kind": "minimal_np", "pairs": [{"f3": [[1e7, 0]]}]}, "grid": {"n": 5}}"#,
    );
    let out = loopforge().args(["run", "--quiet"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn residual_above_tolerance_exits_three() {
    // A Maurer-Cartan tolerance far below what finite differences can certify.
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        r#"{"m": 3, "potential": {"kind": "minimal_np", "pairs": [{"f1": [[0, 0], [1, 0]], "f4": [[1, 0]]}]},
            "grid": {"n": 3, "radius": 0.3}, "tolerances": {"pattern": 1e-15}}"#,
    );
    let out = loopforge().args(["run", "--quiet"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_oracle_and_selftest_pass() {
    let out = loopforge().arg("verify-oracle").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["cases"], 100);

    let out = loopforge().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
