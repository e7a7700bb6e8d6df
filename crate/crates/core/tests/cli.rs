use std::process::{Command, Output};

use cone_sod::report::{from_json, CohomologyTable, HomReport, InstanceReport, Render};
use cone_sod::SodReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cone-sod"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Parse, re-render, and demand the exact same bytes.
fn round_trip<T: Render>(args: &[&str]) -> T {
    let out = run(args);
    let text = stdout(&out);
    let parsed: T = from_json(&text).expect("valid JSON document");
    assert_eq!(parsed.json(), text, "re-rendered JSON differs for {args:?}");
    parsed
}

#[test]
fn builtin_reports_pass() {
    for name in ["P1113", "P112"] {
        let out = run(&["paper-report", name]);
        assert_eq!(code(&out), 0, "{name}: {}", stdout(&out));
    }
}

#[test]
fn report_json_round_trips() {
    let r: InstanceReport = round_trip(&["paper-report", "P1113", "--format", "json"]);
    assert!(r.passed);
    assert_eq!(r.space, [3, 3]);
    let r: InstanceReport = round_trip(&["paper-report", "P112", "--format", "json"]);
    assert!(r.passed);
}

#[test]
fn sod_json_round_trips() {
    let r: SodReport =
        round_trip(&["--config", "configs/p1113.toml", "verify-sod", "main", "--format", "json"]);
    assert!(r.passed);
    assert_eq!(r.end_dims(), vec![45, 1, 1]);
    assert_eq!(r.ranks(), vec![9, 1, 1]);
}

#[test]
fn hom_json_round_trips() {
    let r: HomReport = round_trip(&["--config", "configs/p1113.toml", "hom", "F", "G", "--format", "json"]);
    assert_eq!(r.dims.iter().sum::<usize>(), 24);
    assert_eq!(r.dims[0], 24);
    assert!(!r.ladders.is_empty());
}

#[test]
fn cohomology_json_round_trips() {
    let t: CohomologyTable = round_trip(&["--space", "3,3", "cohomology", "O_Z", "-4..4", "--format", "json"]);
    assert_eq!(t.rows.len(), 9);
}

#[test]
fn hom_text_lists_degrees() {
    let out = run(&["--config", "configs/p1113.toml", "hom", "F", "G"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("deg0: 24"));
    let out = run(&["--space", "3,3", "hom", "ker(1)", "O_X(0)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("deg0: 9"));
}

#[test]
fn reversed_collection_fails() {
    let out = run(&["--config", "configs/p1113.toml", "verify-sod", "reversed"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("is not zero"));
}

#[test]
fn small_surface_collection_passes() {
    let out = run(&["--config", "configs/p112.toml", "verify-sod", "sod"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["paper-report", "X"],
        vec!["--space", "0,3", "cohomology", "O_X", "0"],
        vec!["--space", "three", "cohomology", "O_X", "0"],
        vec!["cohomology", "O_X", "0"],
        vec!["--space", "3,3", "cohomology", "O_Y", "0"],
        vec!["--space", "3,3", "cohomology", "O_X", "5..1"],
        vec!["--space", "3,3", "hom", "ker(3)", "O_X(0)"],
        vec!["--space", "3,3", "hom", "nonsense(", "O_X(0)"],
        vec!["--config", "configs/p1113.toml", "verify-sod", "missing"],
        vec!["--config", "configs/p1113.toml", "--space", "2,2", "hom", "F", "G"],
        vec!["--config", "configs/absent.toml", "hom", "F", "G"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn refusals_exit_three() {
    // O_X(1) is not invertible when m = 3.
    let out = run(&["--space", "3,3", "hom", "O_X(1)", "O_X(0)"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("refused:"));
}

#[test]
fn markdown_output_has_tables() {
    let out = run(&["paper-report", "P1113", "--format", "markdown"]);
    assert_eq!(code(&out), 0);
    let md = stdout(&out);
    assert!(md.starts_with('#'));
    assert!(md.contains("| --- |") || md.contains("|---|") || md.contains("| ---"));
    assert!(md.contains("**Result: PASS**"));
}
