use loopforge_core::io::{export_outputs, load_config, report_json, run_pipeline, IoError, Verdict};

fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn config_file_to_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display();
    let cfg = write(
        dir.path(),
        "run.json",
        &format!(
            r#"{{
  "m": 3,
  "potential": {{"kind": "minimal_np", "pairs": [{{"f1": [[1, 0]], "f4": [[0, 0], [0.5, 0.5]]}}]}},
  "grid": {{"center": [0.1, 0], "radius": 0.3, "n": 5}},
  "lambda_count": 6,
  "outputs": {{"report_path": "{d}/report.json", "frames_path": "{d}/frames.csv", "fields_path": "{d}/fields.csv"}}
}}"#
        ),
    );
    let spec = load_config(&cfg).unwrap();
    let out = run_pipeline(&spec).unwrap();
    export_outputs(&out, &spec).unwrap();

    let frames = std::fs::read_to_string(dir.path().join("frames.csv")).unwrap();
    assert_eq!(frames.lines().count(), 1 + 25 * 6);
    let fields = std::fs::read_to_string(dir.path().join("fields.csv")).unwrap();
    assert_eq!(fields.lines().count(), 1 + 25);
    assert!(fields.lines().skip(1).all(|l| l.split(',').nth(2) == Some("ok")));

    let written = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let again = report_json(&run_pipeline(&load_config(&cfg).unwrap()).unwrap().report);
    assert_eq!(written, again);
}

#[test]
fn missing_config_is_an_io_error() {
    let err = load_config(std::path::Path::new("/nonexistent/run.json")).unwrap_err();
    assert!(matches!(err, IoError::Io { .. }));
}

#[test]
fn wrong_column_count_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"m": 3, "potential": {"kind": "timelike", "g0": [], "columns": [[]]}}"#,
    );
    let spec = load_config(&cfg).unwrap();
    assert!(matches!(run_pipeline(&spec), Err(IoError::Spec(_))));
}

#[test]
fn cell_boundary_points_are_recorded_not_fatal() {
    // |f|² ~ 1e13 at the rim pushes cond(d) past 1/invert; the center still solves.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "huge.json",
        r#"{"m": 3, "potential": {"kind": "minimal_np", "pairs": [{"f3": [[1e7, 0]]}]},
            "grid": {"radius": 0.5, "n": 5}}"#,
    );
    let spec = load_config(&cfg).unwrap();
    let out = run_pipeline(&spec).unwrap();
    let r = &out.report;
    assert_eq!(r.verdict, Verdict::CellBoundaryEncountered);
    assert_eq!(r.exit_code(), 2);
    assert!(r.points_solved >= 1 && r.points_solved < r.points_total);
    assert!(r.failures.iter().any(|f| f.kind == "cell_boundary"));

    let mut buf = Vec::new();
    loopforge_core::io::write_frames_csv(&out, 6, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().any(|l| l.ends_with("NaN")));
    assert_eq!(text.lines().count(), 1 + 25 * 8);
}
