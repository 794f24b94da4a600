use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;

use toric_ci_cli::format::*;
use toric_ci_cli::{to_json, CliError};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-ci"))
        .args(args)
        .env_remove("TORIC_CI_JOBS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Parses with the reader type and checks that writing it back reproduces
/// the text exactly.
fn round_trip<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let v: T = serde_json::from_str(text).unwrap();
    assert_eq!(to_json(&v), text);
    v
}

fn surface() -> String {
    fixture("surface.json").display().to_string()
}

#[test]
fn homogenize_surface() {
    let out: HomogenizeOutput = round_trip(&ok(&["homogenize", "--input", &surface()]));
    assert_eq!(out.polynomials.len(), 1);
    assert_eq!(out.polynomials[0].display, "T1^2 + T2^2 + T3^2");
    assert_eq!(out.class_group.free_rank, 2);
    assert_eq!(out.generator_degrees.len(), 5);
}

#[test]
fn sigma_x_surface() {
    let out: SigmaXOutput = round_trip(&ok(&["sigma-x", "--input", &surface()]));
    let expected: Vec<Vec<usize>> = vec![vec![0, 3], vec![0, 4], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]];
    assert_eq!(out.maximal, expected);
}

#[test]
fn explicit_coefficients_need_the_shortcut() {
    let dir = tempfile::tempdir().unwrap();
    let mut input: SystemInput = serde_json::from_str(&fs::read_to_string(fixture("surface.json")).unwrap()).unwrap();
    for t in &mut input.system[0] {
        t.coefficient = Some("1".into());
    }
    let path = dir.path().join("explicit.json");
    fs::write(&path, serde_json::to_string(&input).unwrap()).unwrap();
    let p = path.display().to_string();
    assert_eq!(cli(&["sigma-x", "--input", &p, "--mode", "explicit"]).status.code(), Some(3));
    let out: SigmaXOutput = serde_json::from_str(&ok(&["sigma-x", "--input", &p, "--mode", "generic"])).unwrap();
    assert_eq!(out.maximal.len(), 6);
    let h: HomogenizeOutput = serde_json::from_str(&ok(&["homogenize", "--input", &p, "--mode", "explicit"])).unwrap();
    assert!(h.polynomials[0].terms.iter().all(|t| t.coefficient.as_deref() == Some("1")));
}

#[test]
fn acc_half_cone() {
    let out: AccOutput = round_trip(&ok(&["acc", "--input", &fixture("half_cone.json").display().to_string()]));
    assert_eq!(out.verdict, "terminal");
    assert_eq!(out.gorenstein_index.0, 2.into());
    assert_eq!(out.discrepancies[0].discrepancy, "1/2");
    assert_eq!(out.discrepancies[0].boundary_point, vec!["2/3", "2/3", "2/3"]);
}

#[test]
fn acc_third_cone() {
    let out: AccOutput = round_trip(&ok(&["acc", "--input", &fixture("third_cone.json").display().to_string()]));
    assert_eq!(out.verdict, "canonical-not-terminal");
    assert_eq!(out.witnesses, vec![ints_i64(&[0, 0, 1])]);
    assert_eq!(out.discrepancies[0].discrepancy, "0");
}

#[test]
fn invariants_quartic_and_torsion() {
    let q: InvariantsOutput = round_trip(&ok(&["invariants", "--input", &fixture("quartic.json").display().to_string()]));
    assert_eq!((q.minus_k_cubed.as_str(), q.h0_minus_k.0.clone()), ("4", 5.into()));
    assert_eq!(q.verdict, "terminal");
    let t: InvariantsOutput = round_trip(&ok(&["invariants", "--input", &fixture("torsion_cubic.json").display().to_string()]));
    assert_eq!(t.minus_k, ints_i64(&[2, 1]));
    assert_eq!(t.minus_k_cubed, "8");
    assert_eq!(t.fano_index.0, 2.into());
    assert_eq!(t.gorenstein_index.0, 3.into());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    assert_eq!(cli(&["acc", "--input", &bad.display().to_string()]).status.code(), Some(2));
    assert_eq!(cli(&["classify", "--s", "4"]).status.code(), Some(2));
    assert_eq!(cli(&["acc"]).status.code(), Some(2));

    // four rays off a common plane: no Gorenstein form
    let quad = dir.path().join("quad.json");
    fs::write(
        &quad,
        r#"{"fan": {"dim": 3, "rays": [[1,0,1],[0,1,1],[-1,0,1],[0,-1,2]], "max_cones": [[0,1,2,3]]}}"#,
    )
    .unwrap();
    let out = cli(&["acc", "--input", &quad.display().to_string()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q-Gorenstein"));

    // the projective plane fan does not refine the normal fan of 1 + x + y^2
    let plane = dir.path().join("plane.json");
    fs::write(
        &plane,
        r#"{"fan": {"dim": 2, "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[1,2],[0,2]]},
            "system": [[{"exponent": [0,0]}, {"exponent": [1,0]}, {"exponent": [0,2]}]]}"#,
    )
    .unwrap();
    let out = cli(&["homogenize", "--input", &plane.display().to_string()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("F-fan"));

    let guard = CliError::Math(toric_ci::Error::Transversality {
        cone: vec![0],
        found: 1,
        expected: 2,
    });
    assert_eq!(guard.exit_code(), 4);
}

#[test]
fn classify_three_relations_table() {
    let text = ok(&["classify", "--s", "3"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r.split_whitespace().nth(1), Some("3"));
    }
}

fn read_records(dir: &Path) -> (String, Vec<FamilyRecord>) {
    let text = fs::read_to_string(dir.join("families.jsonl")).unwrap();
    let records = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    (text, records)
}

#[test]
fn serial_and_parallel_outputs_agree() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(&["classify", "--s", "2,3", "--serial", "--output", &a.path().display().to_string()]);
    let out = Command::new(env!("CARGO_BIN_EXE_toric-ci"))
        .args(["classify", "--s", "3,2", "--output", &b.path().display().to_string()])
        .env("TORIC_CI_JOBS", "4")
        .output()
        .unwrap();
    assert!(out.status.success());
    for f in ["families.jsonl", "families.txt", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let (text, records) = read_records(a.path());
    assert_eq!(records.len(), 14);
    let rewritten: String = records.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect();
    assert_eq!(rewritten, text);
}

#[test]
fn resume_after_interruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    ok(&["classify", "--s", "2", "--output", &d]);
    let (reference, _) = read_records(dir.path());
    let progress = fs::read_to_string(dir.path().join("progress.jsonl")).unwrap();
    let first = progress.lines().next().unwrap();
    // one finished tuple and a line cut off mid-write
    fs::write(dir.path().join("progress.jsonl"), format!("{first}\n{}", &first[..first.len() / 2])).unwrap();
    fs::remove_file(dir.path().join("families.jsonl")).unwrap();
    let manifest = dir.path().join("manifest.json").display().to_string();
    ok(&["classify", "--resume", &manifest]);
    let (resumed, _) = read_records(dir.path());
    assert_eq!(resumed, reference);
    let m: toric_ci_cli::run::Manifest = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert!(m.complete);
    assert_eq!(m.families, 10);
    assert_eq!(fs::read_to_string(dir.path().join("progress.jsonl")).unwrap().lines().count(), m.tuples);
}
