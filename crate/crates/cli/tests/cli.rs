use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn symplaw(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symplaw"));
    cmd.args(args).env_remove("SYMPLAW_MAX_DIM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let path = dir.path().join(name);
    fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap().trim().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn pfaffian_suite_passes() {
    let out = symplaw(&["suite", "pfaffian", "--d", "2", "--trials", "100", "--seed", "7"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["passed"], json!(true));
    assert!(r["checks"].as_array().unwrap().len() >= 7);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = symplaw(
            &["suite", "pseudochar", "--d", "1", "--trials", "10", "--seed", "11", "--out", path.to_str().unwrap()],
            &[],
        );
        assert_eq!(out.status.code(), Some(0));
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn det_law_suite_reports_printed_closed_forms() {
    let out = symplaw(&["suite", "det-law", "--d", "2", "--trials", "10", "--seed", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["printed_closed_forms_d4"]["matches"], json!(false));
    assert_eq!(r["printed_closed_forms_d4"]["lambda_form"], json!("37"));
}

#[test]
fn det_law_suite_accepts_a_representation() {
    let dir = TempDir::new().unwrap();
    let rep = json!({"d": 1, "kind": "GSp", "generators": [[[1, 1], [0, 1]], [[2, 0], [0, 3]]]});
    let path = write(&dir, "rep.json", &rep);
    let out = symplaw(&["suite", "det-law", "--input", &path, "--trials", "5"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["kind"], json!("GSp"));
    assert_eq!(r["generators"], json!(2));
}

#[test]
fn invariants_report_shape() {
    let out = symplaw(&["suite", "invariants", "--d", "1", "--m", "3", "--trials", "5"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["d"], json!(1));
    assert_eq!(r["m"], json!(3));
    assert_eq!(r["oracle_dim"], json!(5));
    assert_eq!(r["span_dim"], json!(5));
    assert_eq!(r["match"], json!(true));
}

#[test]
fn gma_counterexample_is_an_expected_failure_fixture() {
    let dir = TempDir::new().unwrap();
    let spec = json!({
        "I0": [], "I1": [1], "I2": [2], "sigma": [2, 1], "dims": [1, 1],
        "base_vars": ["u", "v"], "nil_monomials": [[1, 1]],
        "blocks": {"1,2": ["u"], "2,1": ["v"]},
        "tau_signs": {"1,2": -1, "2,1": -1},
    });
    let path = write(&dir, "spec.json", &spec);
    let out = symplaw(&["suite", "gma", "--input", &path, "--trials", "10", "--seed", "3"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sch_condition"], json!(false));
    let chi = r["chi_witness"]["chi"].as_array().unwrap();
    assert!(chi.iter().flat_map(|row| row.as_array().unwrap()).any(|e| e != "0"));
    assert_eq!(r["chi_witness"]["in_det_kernel"], json!(true));
}

#[test]
fn gma_standard_example_satisfies_the_condition() {
    let out = symplaw(&["suite", "gma", "--trials", "10"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sch_condition"], json!(true));
    assert!(r.get("chi_witness").is_none());
}

#[test]
fn failed_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let spec = json!({
        "I0": [], "I1": [1], "I2": [2], "sigma": [2, 1], "dims": [1, 1],
        "base_vars": ["u"], "blocks": {"1,2": ["u"], "2,1": ["u"]},
    });
    let path = write(&dir, "spec.json", &spec);
    let out = symplaw(&["suite", "gma", "--input", &path, "--trials", "3"], &[]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["passed"], json!(false));
    assert_eq!(r["checks"][0]["name"], json!("standard_gma"));
    assert!(!r["checks"][0]["witness"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{not json").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(symplaw(&["eval", "pfaffian", "--input", p], &[]).status.code(), Some(2));
    assert_eq!(symplaw(&["suite", "det-law", "--input", p], &[]).status.code(), Some(2));
    let wrong = write(&dir, "wrong.json", &json!({"d": 1, "generators": "nope"}));
    assert_eq!(symplaw(&["suite", "pseudochar", "--input", &wrong], &[]).status.code(), Some(2));
    assert_eq!(symplaw(&["eval", "theta", "--input", &wrong], &[]).status.code(), Some(2));
    let missing = Path::new("/nonexistent/input.json").to_str().unwrap();
    assert_eq!(symplaw(&["eval", "detlaw", "--input", missing], &[]).status.code(), Some(2));
    assert_eq!(symplaw(&["suite", "pfaffian", "--trials", "0"], &[]).status.code(), Some(2));
}

#[test]
fn dimension_cap_from_environment() {
    let capped = symplaw(&["suite", "pfaffian", "--d", "3", "--trials", "1"], &[("SYMPLAW_MAX_DIM", "4")]);
    assert_eq!(capped.status.code(), Some(2));
    let default_cap = symplaw(&["suite", "pfaffian", "--d", "7", "--trials", "1"], &[]);
    assert_eq!(default_cap.status.code(), Some(2));
    let allowed = symplaw(&["suite", "pfaffian", "--d", "3", "--trials", "2"], &[("SYMPLAW_MAX_DIM", "6")]);
    assert_eq!(allowed.status.code(), Some(0));
}

#[test]
fn eval_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("pfaffian", json!([[0, "1"], ["-1", 0]]), "1"),
        ("pfaffian", json!({"matrix": [[0, "a", "b", "c"], ["-a", 0, "d", "e"], ["-b", "-d", 0, "f"], ["-c", "-e", "-f", 0]]}), "a*f - b*e + c*d"),
        ("detlaw", json!({"d": 2, "element": {"terms": [{"word": "1", "coef": "c"}]}}), "c^4"),
        ("detlaw", json!({"d": 2, "law": "pf", "element": {"terms": [{"word": "1", "coef": "c"}]}}), "c^2"),
        ("theta", json!({"d": 2, "function": {"sigma": 1, "word": "X"}, "gammas": ["1"]}), "4"),
        ("invariant", json!({"function": {"sigma": 1, "word": "X1 X2"}, "matrices": [[[1, 2], [3, 4]], [[0, 1], [1, 0]]]}), "5"),
    ];
    for (k, (what, input, expected)) in cases.into_iter().enumerate() {
        let path = write(&dir, &format!("in{k}.json"), &input);
        let out = symplaw(&["eval", what, "--input", &path], &[]);
        assert_eq!(out.status.code(), Some(0), "{what}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out), expected, "{what} on {input}");
    }
}

#[test]
fn eval_writes_to_out_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", &json!([[0, "3/2"], ["-3/2", 0]]));
    let out_path = dir.path().join("out.txt");
    let out = symplaw(&["eval", "pfaffian", "--input", &input, "--out", out_path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out_path).unwrap().trim(), "3/2");
}
