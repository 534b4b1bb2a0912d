use std::process::{Command, Output};

use serde_json::Value;

fn qshap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshap")).args(args).env("QSHAP_THREADS", "2").output().expect("run qshap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = qshap(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(&o)));
    assert_eq!(v["schema"], "qshap/1");
    (v, o.status.code().unwrap())
}

#[test]
fn det_sq2_two_alpha() {
    let o = qshap(&["det", "--kind", "sq", "--rank", "2", "--nu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Norm = (h1 + h2)*(h1 - h2 - 1)^2*(h1 - h2 - 2)"), "{out}");

    let (v, code) = json(&["det", "--kind", "sq", "--rank", "2", "--nu", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 4);
    assert_eq!(v["leadingOk"], true);
    assert_eq!(v["degreeOk"], true);
    assert_eq!(v["nu"], serde_json::json!([2]));
    assert_eq!(v["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn simple_verdict_with_witnesses() {
    // h_2 - h_3 = 2 is a positive integer, so N(λ) is reducible
    let (v, code) = json(&["simple", "--kind", "q", "--rank", "3", "--lambda", "1/3,0,-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["simple"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    let (v, _) = json(&["simple", "--kind", "q", "--rank", "3", "--lambda", "1/3,1/5,1/7"]);
    assert_eq!(v["simple"], true);
}

#[test]
fn verify_fans_out() {
    let (v, code) = json(&["verify", "--kind", "sq", "--rank", "2", "--max-height", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    assert_eq!(v["ok"], true);
}

#[test]
fn matrix_b0_is_antidiagonal() {
    let (v, code) = json(&["matrix", "--kind", "sq", "--rank", "2", "--nu", "0"]);
    assert_eq!(code, 0);
    let e = &v["entries"];
    assert_eq!(e[0][0], "0");
    assert_eq!(e[1][1], "0");
    let off: Vec<&str> = [&e[0][1], &e[1][0]].iter().map(|x| x.as_str().unwrap()).collect();
    assert!(off.iter().all(|s| *s == "1" || *s == "-1"));
}

#[test]
fn sumcheck_and_jantzen_agree() {
    let (v, code) = json(&["sumcheck", "--kind", "q", "--rank", "2", "--lambda", "3/2,-3/2", "--max-height", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], true);
    let (j, _) = json(&["jantzen", "--kind", "q", "--rank", "2", "--lambda", "3/2,-3/2", "--max-height", "3"]);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(j["orders"][r["nu"].as_str().unwrap()], r["order"]);
    }
}

#[test]
fn centre_check_and_construct() {
    let (v, _) = json(&["centre-check", "--kind", "q", "--rank", "2", "--poly", "h1^3 + h2^3"]);
    assert_eq!(v["member"], true);
    let (v, _) = json(&["centre-check", "--kind", "q", "--rank", "2", "--poly", "h1*h2"]);
    assert_eq!(v["member"], false);

    let (v, code) = json(&["construct", "--kind", "sq", "--rank", "2", "--poly", "1", "--nu", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["residual_zero"], true);
}

#[test]
fn search_and_tg() {
    let (v, _) = json(&["search", "--kind", "q", "--rank", "2", "--degree", "2"]);
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    let (v, _) = json(&["tg", "--kind", "q", "--rank", "2"]);
    assert!(v["t_g"].as_str().unwrap().contains("h1"));
}

#[test]
fn classify_and_char() {
    let (v, _) = json(&["classify", "--kind", "sq", "--rank", "2", "--lambda", "1/2,1/3"]);
    assert_eq!(v["class"], "regular");
    let (v, _) = json(&["char", "--kind", "sq", "--rank", "2", "--lambda", "1/2,1/3", "--max-height", "2"]);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    // implicit product
    let o = qshap(&["centre-check", "--kind", "q", "--rank", "2", "--poly", "h1 h2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:4"));
    // unknown kind, wrong arity, missing verb
    assert_eq!(qshap(&["det", "--kind", "r", "--nu", "1"]).status.code(), Some(2));
    assert_eq!(qshap(&["simple", "--kind", "q", "--rank", "3", "--lambda", "1,2"]).status.code(), Some(2));
    assert_eq!(qshap(&[]).status.code(), Some(2));
    // non-generic rho'
    let o = qshap(&["jantzen", "--kind", "q", "--rank", "2", "--lambda", "1,0", "--rho-prime", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construct_refuses_non_member() {
    let (v, code) = json(&["construct", "--kind", "q", "--rank", "2", "--poly", "h1^2 + h2^2", "--nu", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["ok"], false);
}

#[test]
fn selftest_subset() {
    let o = qshap(&["selftest", "--criteria", "2,8"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
}
