use std::io::Write;
use std::path::Path;
use std::process::Command;

use tempfile::NamedTempFile;
use trigsym::sdp::SolverConfig;
use trigsym_cli::{run, CliError, Format, Report, RunMode, RunRequest};

const A1_EXAMPLE: &str = r#"{"root_system": "A1", "terms": [
  {"weight": [2], "re": 1.0},
  {"weight": [1], "re": -2.0},
  {"weight": [0], "re": 3.0}
]}"#;

const A2_EXAMPLE: &str = r#"{"root_system": "A2", "terms": [
  {"weight": [0, 0], "re": 6},
  {"weight": [1, 0], "re": 4}, {"weight": [0, 1], "re": 4}, {"weight": [-1, 1], "re": 4},
  {"weight": [2, 0], "re": 2}, {"weight": [0, 2], "re": 2}, {"weight": [-2, 2], "re": 2}
]}"#;

const A2_SKEW: &str = r#"{"root_system": "A2", "terms": [
  {"weight": [0, 0], "re": 2}, {"weight": [1, 0], "re": 1}
]}"#;

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn request(path: &Path, modes: &[RunMode]) -> RunRequest {
    RunRequest {
        input: path.to_path_buf(),
        degree: None,
        modes: modes.to_vec(),
        format: Format::Json,
        solver: SolverConfig::default(),
        symmetrize: false,
        parallel: false,
        seed: 0,
    }
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_trigsym"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn a1_example_all_modes() {
    let f = file(A1_EXAMPLE);
    let report = run(&request(f.path(), &RunMode::ALL)).unwrap();
    assert_eq!(report.degree, 1);
    for b in [
        report.bounds.dense,
        report.bounds.invariant,
        report.bounds.block,
    ] {
        assert!(b.unwrap().abs() < 1e-6);
    }
    assert!(report.oracle.as_ref().unwrap().value.abs() < 1e-4);
    assert_eq!(report.solver.len(), 3);
    let mults: Vec<usize> = report.layout.iter().map(|l| l.mult).collect();
    assert_eq!(mults, vec![1, 2]);
}

#[test]
fn a2_example_sizes() {
    let f = file(A2_EXAMPLE);
    let report = run(&request(f.path(), &[RunMode::Sizes])).unwrap();
    let sizes = report.sizes.as_ref().unwrap();
    assert_eq!(sizes.dense, 49);
    assert_eq!(sizes.sab_distinct, 13);
    assert!(sizes.note.contains("13") && sizes.note.contains("49"));
    let blocks: Vec<(usize, usize)> = report
        .layout
        .iter()
        .filter(|l| l.mult > 0)
        .map(|l| (l.dim, l.mult))
        .collect();
    assert_eq!(blocks, vec![(2, 2), (1, 3)]);
    assert!(report.bounds.dense.is_none() && report.oracle.is_none());
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let f = file(A2_EXAMPLE);
    let mut req = request(f.path(), &RunMode::ALL);
    let a = run(&req).unwrap();
    assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);
    req.parallel = true;
    let b = run(&req).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let block = a.bounds.block.unwrap();
    assert!((a.bounds.dense.unwrap() - block).abs() < 1e-5);
    assert!(a.oracle.unwrap().value >= block - 1e-5);
}

#[test]
fn non_invariant_input_needs_symmetrize() {
    let f = file(A2_SKEW);
    let mut req = request(f.path(), &[RunMode::Dense, RunMode::Block]);
    let e = run(&req).unwrap_err();
    assert!(matches!(
        e,
        CliError::Input(trigsym::Error::NotInvariant { .. })
    ));
    assert_eq!(e.exit_code(), 2);
    req.symmetrize = true;
    let report = run(&req).unwrap();
    assert!(report.symmetrized);
    assert!(report.bounds.block.is_some());
    // dense mode keeps the original input
    req.modes = vec![RunMode::Dense];
    req.symmetrize = false;
    assert!(run(&req).is_ok());
}

#[test]
fn degree_override_and_errors() {
    let f = file(A1_EXAMPLE);
    let mut req = request(f.path(), &[RunMode::Block]);
    req.degree = Some(2);
    let r = run(&req).unwrap();
    assert_eq!(r.weights, 5);
    assert!(r.bounds.block.unwrap().abs() < 1e-6);
    req.degree = Some(0);
    assert!(matches!(
        run(&req).unwrap_err(),
        CliError::Input(trigsym::Error::DegreeTooSmall { .. })
    ));
    req.modes.clear();
    assert!(matches!(run(&req).unwrap_err(), CliError::NoModes));
}

#[test]
fn binary_exit_codes() {
    let good = file(A1_EXAMPLE);
    let p = good.path().to_str().unwrap();
    let (code, out, _) = binary(&["--input", p, "--modes", "dense,sizes", "--format", "json"]);
    assert_eq!(code, 0);
    let report = Report::from_json(&out).unwrap();
    assert!(report.bounds.dense.unwrap().abs() < 1e-6);

    let (code, out, _) = binary(&["--input", p]);
    assert_eq!(code, 0);
    assert!(out.contains("bound block"));

    let empty = file("");
    let (code, _, err) = binary(&["--input", empty.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"), "{err}");

    let (code, _, err) = binary(&["--input", "/nonexistent/poly.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));

    let (code, _, err) = binary(&["--input", p, "--modes", "dense", "--max-iter", "1"]);
    assert_eq!(code, 3, "{err}");
}
