use std::process::{Command, Output};

use serde_json::Value;

fn cq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cq")).args(args).output().expect("cq runs")
}

fn json(args: &[&str]) -> Value {
    let out = cq(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn canonical_in_h_basis() {
    let v = json(&["canonical", "--n", "3", "--basis", "H"]);
    assert_eq!(v["coeffs"], serde_json::json!(["-2", "-1", "-2"]));
    assert_eq!(v["schema"], "cq.canonical/1");
    let v = json(&["canonical", "--n", "3", "--basis", "mixed", "--method", "nefbasis"]);
    assert_eq!(v["display"], "-10H1 + 5E1 + 2E2");
}

#[test]
fn chamber_of_the_sum_of_nef_generators() {
    let v = json(&["chamber", "--divisor", r#"{"basis":"H","coeffs":["1","1","1"]}"#]);
    assert_eq!(v["chamber"], 1);
    assert_eq!(v["base_locus"], "∅");
    let v = json(&["chamber", "--divisor", r#"{"basis":"E","coeffs":[1,1,0]}"#]);
    assert_eq!(v["chamber"], 7);
    let v = json(&["chamber", "--segment", "1/2"]);
    assert_eq!(v["face"], "wall");
}

#[test]
fn schubert_degrees() {
    let v = json(&["schubert", "--grassmannian", "1,3", "--expr", "sigma1^4"]);
    assert_eq!(v["degree"], 2);
    let v = json(&["schubert", "--grassmannian", "1,4", "--expr", "sigma1^6"]);
    assert_eq!(v["degree"], 5);
    let out = cq(&["schubert", "--expr", "sigma1^4", "--text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
}

#[test]
fn pairing_and_cones() {
    let v = json(&["pair", "--curve", "R2", "--divisor", r#"{"coeffs":["4","-2","4"]}"#]);
    assert_eq!(v["value"], "4");
    let v = json(&["cone", "--divisor", r#"{"basis":"mixed","coeffs":["12","-6","-4"]}"#]);
    assert_eq!(v["cones"]["nef"]["member"], false);
    assert_eq!(v["cones"]["mov"]["member"], true);
}

#[test]
fn table_has_eight_rows() {
    let v = json(&["table"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["values"], serde_json::json!([1, 2, 3, 0, 0, 4]));
}

#[test]
fn chow_limit_of_rank_one_family() {
    let q0 = r#"{"n":3,"matrix":[["1","0","0","0"],["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]}"#;
    let q1 = r#"{"n":3,"matrix":[["0","0","0","0"],["0","1","0","0"],["0","0","2","0"],["0","0","0","3"]]}"#;
    let v = json(&["chow", "--form", q0, "--k", "2", "--toward", q1]);
    assert_eq!(v["limit"]["valuation"], 1);
    let terms = v["limit"]["terms"].as_object().unwrap();
    let keys: Vec<&str> = terms.keys().map(String::as_str).collect();
    assert_eq!(keys, ["p0*p0", "p1*p1", "p2*p2"]);
    assert_eq!(v["subsets"][0], serde_json::json!([0, 1]));
}

#[test]
fn pencil_counts() {
    let v = json(&["pencil", "--n", "4", "--k", "2", "--seed", "5"]);
    assert_eq!(v["distinct"], 3);
    let v = json(&["pencil", "--verify-table", "--seed", "2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 13);
}

#[test]
fn argument_errors_exit_with_two() {
    assert_eq!(cq(&["canonical"]).status.code(), Some(2));
    assert_eq!(cq(&["chamber", "--divisor", "{"]).status.code(), Some(2));
    assert_eq!(cq(&["chamber", "--divisor", r#"{"coeffs":["-1","0","0"]}"#]).status.code(), Some(2));
    assert_eq!(cq(&["schubert", "--grassmannian", "1,4", "--expr", "sigma2*sigma2"]).status.code(), Some(2));
    assert_eq!(cq(&["schubert", "--grassmannian", "13", "--expr", "sigma1"]).status.code(), Some(2));
    assert_eq!(cq(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn identical_runs_give_identical_output() {
    let args = ["chamber", "--census", "200", "--seed", "9"];
    let a = cq(&args);
    let b = cq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = cq(&["verify-all", "--quick", "--seed", "4"]);
    let b = cq(&["verify-all", "--quick", "--seed", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 10);
}

#[test]
fn text_output_is_aligned() {
    let out = cq(&["table", "--text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    let first = s.lines().next().unwrap();
    assert!(first.starts_with("curve  H1  H2"));
    assert_eq!(s.lines().count(), 9);
}
