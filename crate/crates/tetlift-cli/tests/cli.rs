//! Exit-code contract and file round-trips for the command-line front end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tetlift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("tetlift-cli-test-{}-{}", std::process::id(), name));
    p
}

#[test]
fn moments_table_contains_known_values() {
    let out = run(&["moments", "--m", "1", "--max-degree", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("alpha1,alpha2,value"));
    assert!(text.contains("0,0,1\n"));
    assert!(text.contains("1,0,1/3\n"));
}

#[test]
fn roundtrip_command_reports_all_passes() {
    let report = tmp("roundtrip.json");
    let out = run(&[
        "verify-roundtrip",
        "--degree",
        "4",
        "--order",
        "1",
        "--samples",
        "10",
        "--seed",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("10/10 exact round-trips"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passes"], 10);
    assert_eq!(json["schema_version"], 1);
    std::fs::remove_file(report).ok();
}

#[test]
fn trace_lift_round_trip_through_files() {
    // u = x*y - z written as JSON, traced, lifted, compared.
    let poly = tmp("poly.json");
    let traces = tmp("traces.json");
    let lifted = tmp("lifted.json");
    let u = serde_json::json!({
        "vars": 3,
        "terms": [
            {"exp": [1, 1, 0], "coeff": {"rat": "1", "sqrt3": "0"}},
            {"exp": [0, 0, 1], "coeff": {"rat": "-1", "sqrt3": "0"}},
        ],
    });
    std::fs::write(&poly, u.to_string()).unwrap();

    let out = run(&[
        "trace",
        "--poly",
        poly.to_str().unwrap(),
        "--k",
        "1",
        "--out",
        traces.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&[
        "check",
        "--traces",
        traces.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);

    let out = run(&[
        "lift",
        "--traces",
        traces.to_str().unwrap(),
        "--out",
        lifted.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lifted_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&lifted).unwrap()).unwrap();
    // Degree-one-per-variable data: the lifting recovers u itself.
    assert_eq!(lifted_json["vars"], 3);
    let terms = lifted_json["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);

    for p in [poly, traces, lifted] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn check_flags_perturbed_traces_with_exit_one() {
    let poly = tmp("poly2.json");
    let traces = tmp("traces2.json");
    let u = serde_json::json!({
        "vars": 3,
        "terms": [{"exp": [0, 0, 1], "coeff": {"rat": "1", "sqrt3": "0"}}],
    });
    std::fs::write(&poly, u.to_string()).unwrap();
    let out = run(&[
        "trace",
        "--poly",
        poly.to_str().unwrap(),
        "--k",
        "0",
        "--out",
        traces.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // Corrupt one face datum so it no longer matches across edges.
    let mut tuple: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&traces).unwrap()).unwrap();
    tuple["faces"][0][0]["terms"] = serde_json::json!([
        {"exp": [1, 0], "coeff": {"rat": "1", "sqrt3": "0"}}
    ]);
    std::fs::write(&traces, tuple.to_string()).unwrap();

    let out = run(&["check", "--traces", traces.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report["violations"].as_array().unwrap().is_empty());

    // The lift refuses the same data, with a JSON error under --json.
    let out = bin()
        .args(["--json", "lift", "--traces", traces.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert!(err["error"].as_str().unwrap().contains("incompatible"));

    for p in [poly, traces] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["lift"]); // missing required --traces
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn partial_fractions_table() {
    let out = run(&["partial-fractions", "--beta", "1,1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4); // header + three terms
    assert!(text.contains("1,1,2,1,1"));

    let out = run(&["partial-fractions", "--beta", "1,0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn edge_kernel_grid_csv() {
    let out = run(&["edge-kernel", "--grid", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // Points (i/5, j/5) with i + j <= 4: 6 of them, plus the header.
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("x1,x2,value"));
}

#[test]
fn stability_csv_is_reproducible() {
    let run_once = || {
        let out = run(&[
            "stability",
            "--degree",
            "2",
            "--order",
            "0",
            "--s",
            "1",
            "--samples",
            "4",
            "--seed",
            "11",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let a = run_once();
    let b = run_once();
    assert_eq!(a, b);
    assert!(a.contains("sample,lift_norm,trace_surrogate,ratio"));
}

#[test]
fn lift_e_command_matches_known_value() {
    let poly = tmp("face.json");
    let f = serde_json::json!({
        "vars": 2,
        "terms": [{"exp": [1, 0], "coeff": {"rat": "1", "sqrt3": "0"}}],
    });
    std::fs::write(&poly, f.to_string()).unwrap();
    let out = run(&[
        "lift-e",
        "--poly",
        poly.to_str().unwrap(),
        "--k",
        "0",
        "--m",
        "1",
    ]);
    assert!(out.status.success());
    // E0(x1) = x1 + z/3 for the m = 1 bump.
    let lifted: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let terms = lifted["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["exp"], serde_json::json!([0, 0, 1]));
    assert_eq!(terms[0]["coeff"]["rat"], "1/3");
    std::fs::remove_file(poly).ok();
}
