mod common;

use std::path::Path;

use common::{assert_valid, run, validate};
use serde_json::{json, Value};

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn family1_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "f1.txt");
    stdout(&["gen", "family1", "--n", "1", "--out", &inst]);
    let p = stdout(&["elim", "points", "--instance", &inst]);
    assert_eq!(p.trim(), "S^2*T^2*U + S^2*T*U - S*T*U*Y + 2*S*T*U - S*T*Y - S*U*Y + S*U - U*Y + Y^2 + U - Y");
    assert!(stdout(&["certify", "eq1", "--n", "1"]).ends_with("verdict pass\n"));
}

#[test]
fn family2_transform_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pc = path(dir.path(), "p.slp");
    let d = path(dir.path(), "d.slp");
    let s = path(dir.path(), "s.slp");
    stdout(&["gen", "pcircuit", "family2", "--delta", "2", "--k", "1", "--out", &pc]);
    stdout(&["diff", "--circuit", &pc, "--var", "S", "--out", &d]);
    stdout(&["specialize", "--circuit", &d, "--bind", "S=0", "--bind", "Y=1/1", "--out", &s]);
    assert_eq!(stdout(&["expand", "--circuit", &s]), "-T_1^2 - T_2^2\n");
}

#[test]
fn resultant_matches_points() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "f2.json");
    stdout(&["gen", "family2", "--delta", "3", "--k", "2", "--format", "json", "--out", &inst]);
    assert_eq!(
        stdout(&["elim", "resultant", "--instance", &inst]),
        stdout(&["elim", "points", "--instance", &inst])
    );
}

#[test]
fn json_outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let i1 = path(dir.path(), "i1.json");
    let i2 = path(dir.path(), "i2.json");
    let h1 = path(dir.path(), "h1.json");
    stdout(&["gen", "family1", "--n", "2", "--format", "json", "--out", &i1]);
    stdout(&["gen", "family2", "--delta", "2", "--k", "2", "--format", "json", "--out", &i2]);
    stdout(&["gen", "pcircuit", "family1", "--n", "1", "--format", "json", "--out", &h1]);
    for f in [&i1, &i2] {
        assert_valid("instance.schema.json", &std::fs::read_to_string(f).unwrap());
        assert_valid("manifest.schema.json", &std::fs::read_to_string(format!("{f}.manifest.json")).unwrap());
    }
    assert_valid("circuit.schema.json", &std::fs::read_to_string(&h1).unwrap());
    let j = ["--format", "json"];
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("polys.schema.json", vec!["expand", "--circuit", &h1]),
        ("polys.schema.json", vec!["elim", "points", "--instance", &i1]),
        ("polys.schema.json", vec!["elim", "resultant", "--instance", &i2]),
        ("circuit.schema.json", vec!["diff", "--circuit", &h1, "--var", "Y"]),
        ("circuit.schema.json", vec!["specialize", "--circuit", &h1, "--bind", "U=2"]),
        ("circuit.schema.json", vec!["gen", "pcircuit", "family2", "--delta", "2", "--k", "1", "--form", "product"]),
        ("cost.schema.json", vec!["measure", "--circuit", &h1]),
        ("certificate.schema.json", vec!["certify", "eq1", "--n", "2"]),
        ("certificate.schema.json", vec!["certify", "vandermonde", "--n", "2", "--points", "1/2,-3,4,7/3"]),
        ("certificate.schema.json", vec!["certify", "vandermonde", "--n", "8"]),
        ("certificate.schema.json", vec!["certify", "audit", "--circuit", &h1, "--n", "1"]),
        ("certificate.schema.json", vec!["certify", "degree", "--delta", "2", "--k", "3"]),
        ("certificate.schema.json", vec!["certify", "elimcx", "--delta", "2"]),
        (
            "certificate.schema.json",
            vec![
                "certify", "size", "--k", "2", "--l", "1", "--n", "1", "--d", "1", "--delta", "4", "--big-delta", "1",
                "--delta-star", "1", "--d-star", "1", "--degrees", "2,2",
            ],
        ),
    ];
    for (schema, mut args) in cases {
        args.extend(j);
        assert_valid(schema, &stdout(&args));
    }
}

#[test]
fn check_all_json_matches_schema() {
    let out = run(&["check", "all", "--max-n", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_valid("suite.schema.json", &String::from_utf8(out.stdout).unwrap());
}

#[test]
fn errors_are_json_with_exit_codes() {
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["certify", "eq1", "--n", "9"], 2, "OutOfRange"),
        (vec!["certify", "vandermonde", "--n", "1", "--points", "2,2"], 2, "DuplicatePoints"),
        (vec!["certify", "vandermonde", "--n", "1", "--points", "0.5,1"], 2, "InvalidInput"),
        (vec!["expand", "--circuit", "/nonexistent/c.slp"], 2, "Io"),
        (vec!["frobnicate"], 2, "Usage"),
        (vec!["check", "all", "--max-n", "3", "--modulus", "12"], 2, "ModulusNotPrime"),
        (vec!["certify", "elimcx", "--delta", "5"], 2, "OutOfRange"),
    ];
    for (args, code, kind) in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_valid("error.schema.json", err.trim());
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], kind, "{args:?}");
    }
}

#[test]
fn audit_of_wrong_circuit_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let h2 = path(dir.path(), "h2.slp");
    stdout(&["gen", "pcircuit", "family1", "--n", "2", "--out", &h2]);
    let out = run(&["certify", "audit", "--circuit", &h2, "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let c = path(dir.path(), "big.slp");
    std::fs::write(&c, "input X\ninput Y\nv2 = add X Y\nv3 = mul v2 v2\nv4 = mul v3 v3\nv5 = mul v4 v4\noutput v5\n").unwrap();
    assert!(run(&["expand", "--circuit", &c, "--term-budget", "9"]).status.success());
    let out = run(&["expand", "--circuit", &c, "--term-budget", "8"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "BudgetExceeded");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn text_instances_are_checked_against_their_header() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "f1.txt");
    stdout(&["gen", "family1", "--n", "1", "--out", &inst]);
    let tampered = std::fs::read_to_string(&inst).unwrap().replace("v7 = sub v2 v1", "v7 = add v2 v1");
    std::fs::write(&inst, tampered).unwrap();
    let out = run(&["elim", "points", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schema_checker_rejects_bad_documents() {
    assert!(!validate("cost.schema.json", &json!({"nonscalar_len": -1, "total_len": 0, "param_count": 0})).is_empty());
    assert!(!validate("error.schema.json", &json!({"error": "x"})).is_empty());
    let bad_node = json!({"inputs": [], "param_vars": [], "param_table": {}, "nodes": [{"op": "div", "lhs": 0, "rhs": 0}],
        "scalar_flag": [true], "outputs": [0]});
    assert!(!validate("circuit.schema.json", &bad_node).is_empty());
}
