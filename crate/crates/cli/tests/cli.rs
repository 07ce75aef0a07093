use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn coxops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxops")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_basis(kind: &str, l: &str, path: &Path) {
    let out = coxops(&["basis", "--kind", kind, "--l", l, "--no-certify", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn basis_a3_exponents() {
    let out = coxops(&["--format", "json", "basis", "--kind", "A", "--l", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let mut e: Vec<i64> = v["certificate"]["exponents"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    e.sort();
    assert_eq!(e, [0, 1, 2, 2, 2, 2]);
    assert_eq!(v["certificate"]["c"], "1/8");
    assert_eq!(v["operators"].as_array().unwrap().len(), 6);
}

#[test]
fn basis_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d4.json");
    let out = coxops(&["basis", "--kind", "d", "--l", "4", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["operators"].as_array().unwrap().len(), 10);
    assert_eq!(v["certificate"]["is_basis"], true);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(coxops(&["basis", "--kind", "A", "--l", "1"]).status.code(), Some(2));
    assert_eq!(coxops(&["basis", "--kind", "A", "--l", "3", "--m", "3"]).status.code(), Some(2));
    assert_eq!(coxops(&["basis", "--kind", "A", "--l", "9"]).status.code(), Some(2));
    assert_eq!(coxops(&["certify", "--ops", "/nonexistent.json", "--kind", "A", "--l", "3"]).status.code(), Some(2));
}

#[test]
fn certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    write_basis("B", "3", &path);
    let out = coxops(&["--format", "json", "certify", "--ops", path.to_str().unwrap(), "--kind", "B", "--l", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["is_basis"], true);
    assert_eq!(v["c"], "1/8");

    // duplicating an operator breaks the family
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ops = doc["operators"].as_array_mut().unwrap();
    ops[1] = ops[0].clone();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc["operators"].to_string()).unwrap();
    let out = coxops(&["certify", "--ops", bad.to_str().unwrap(), "--kind", "B", "--l", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suites() {
    for args in [
        &["verify", "cauchy-sylvester", "--l", "4", "--m", "2"][..],
        &["verify", "cauchy-sylvester", "--l", "3", "--m", "2", "--nvars", "2", "--trials", "4"],
        &["verify", "schur-identity", "--kind", "B", "--l", "3", "--m", "2"],
        &["verify-identity", "--kind", "A", "--l", "4", "--m", "2"],
        &["verify", "invariance", "--kind", "D", "--l", "4"],
        &["verify", "membership", "--kind", "A", "--l", "4"],
    ] {
        let out = coxops(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let v = stdout_json(&coxops(&["--format", "json", "verify", "schur-identity", "--kind", "D", "--l", "4", "--m", "2"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["sign"], 1);
}

#[test]
fn membership_and_act() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3.json");
    write_basis("B", "3", &path);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let op = dir.path().join("op.json");
    std::fs::write(&op, doc["operators"][0].to_string()).unwrap();
    let opp = op.to_str().unwrap();

    assert_eq!(coxops(&["membership", "--op", opp, "--kind", "B", "--l", "3"]).status.code(), Some(0));

    let swapped = coxops(&["--format", "json", "act", "--w", "s12", "--op", opp]);
    assert!(swapped.status.success());
    let img = dir.path().join("img.json");
    std::fs::write(&img, &swapped.stdout).unwrap();
    assert_eq!(coxops(&["membership", "--op", img.to_str().unwrap(), "--kind", "B", "--l", "3"]).status.code(), Some(0));
    // the image of eta_1 under s12 is eta_2
    assert_eq!(stdout_json(&swapped), doc["operators"][1]);
    let back = coxops(&["--format", "json", "act", "--w", "s12*s12", "--op", opp]);
    assert_eq!(stdout_json(&back), doc["operators"][0]);
}

#[test]
fn schur_and_arrangement() {
    let out = coxops(&["schur", "--kind", "B", "--lambda", "1,0", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "x1^3*x2 + x1*x2^3");
    assert_eq!(coxops(&["schur", "--kind", "A", "--lambda", "0,1", "--m", "2"]).status.code(), Some(2));

    let v = stdout_json(&coxops(&["--format", "json", "arrangement", "--kind", "D", "--l", "4"]));
    assert_eq!(v["forms"].as_array().unwrap().len(), 12);
}

#[test]
fn compound_determinant() {
    let dir = tempfile::tempdir().unwrap();
    let m = coxops_matrix_json(&[[2, 1, 0], [0, 3, 1], [1, 0, 1]]);
    let path = dir.path().join("m.json");
    std::fs::write(&path, m).unwrap();
    let out = coxops(&["compound", "--matrix", path.to_str().unwrap(), "--m", "2", "--det"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // det A = 7, det C_2(A) = det(A)^2
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "49");
}

fn coxops_matrix_json(rows: &[[i64; 3]]) -> String {
    let a = coxops::matrix::PolyMatrix::from_integers(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 1).unwrap();
    serde_json::to_string(&a).unwrap()
}
