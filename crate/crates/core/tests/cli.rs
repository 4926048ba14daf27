use std::process::Command;

use gfcohom::cli::{exit, run};
use serde_json::Value;

fn gfcohom(args: &str) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gfcohom"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn json(args: &str) -> (i32, Value, String) {
    let out = run(format!("gfcohom {args} --format json").split_whitespace());
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v, out.stdout)
}

fn dims(v: &Value) -> Vec<u64> {
    v["results"]["betti"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .collect()
}

#[test]
fn betti_tables() {
    let (code, v, _) = json("betti --n 1 --q-max 4");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(dims(&v), [0, 0, 1, 0]);
    let (code, v, _) = json("betti --n 2 --q-max 5");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["betti"][4], serde_json::json!({"degree": 5, "dim": 2}));
}

#[test]
fn binary_exit_codes() {
    assert_eq!(gfcohom("betti --n 1 --q-max 0").0, 64);
    assert_eq!(gfcohom("verify --n 1 bogus").0, 64);
    assert_eq!(gfcohom("betti --n 0").0, 64);
    assert_eq!(gfcohom("frobnicate").0, 64);
    assert_eq!(gfcohom("verify --n 1 a1*t1 --format csv").0, 64);
    assert_eq!(gfcohom("--help").0, 0);
    let (code, stdout, stderr) = gfcohom("betti --n 1 --q-max 4");
    assert_eq!(code, 0);
    assert!(stdout.contains("H^3 = 1"));
    assert!(stderr.contains("elapsed"));
}

#[test]
fn resource_cap_gives_a_partial_table() {
    let (code, v, _) = json("betti --n 2 --q-max 5 --max-slice-dim 70");
    assert_eq!(code, exit::RESOURCE_CAP);
    assert_eq!(v["results"]["partial"], true);
    // H^3 needs the degree-4 slice, of dimension 120.
    assert_eq!(v["results"]["capped_at"], 3);
    assert_eq!(dims(&v), [0, 0]);
}

#[test]
fn verify_verdicts() {
    let (code, v, _) = json("verify --n 2 t1^3");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["cocycle"], true);
    assert_eq!(v["results"]["exact"], true);
    assert_eq!(v["results"]["witness"], "0");

    let (code, v, _) = json("verify --n 1 a1*t1");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["cocycle"], true);
    assert_eq!(v["results"]["exact"], false);
    assert_eq!(v["certificates"]["sampled"]["agrees"], true);

    // Phi(t1) has degree 2 and H^2(vect(1)) = 0: a nonzero witness.
    let (_, v, _) = json("verify --n 1 t1");
    assert_eq!(v["results"]["exact"], true);
    assert_ne!(v["results"]["witness"], "0");

    assert_eq!(run("gfcohom verify --n 1 a2".split_whitespace()).code, exit::PRECONDITION);
}

#[test]
fn descend_reports() {
    let (code, v, _) = json("descend --n 1 a1*t1");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["equivalent_to_reference"], true);
    assert_eq!(v["results"]["reference_scalar"], "-1");
    assert_eq!(v["certificates"]["total_vanishes"], true);
    assert_eq!(v["certificates"]["inputs"]["failures"], 0);
    assert_eq!(v["certificates"]["euler"]["is_divergence"], false);

    let (code, v, _) = json("descend --n 2 a1*t2");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["reference"], "Tr(J)Tr(dJ dJ)");
    assert_eq!(v["results"]["reference_scalar"], "-1");

    // The zero class: the integrand is a divergence.
    let (code, v, _) = json("descend --n 1 t1");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["certificates"]["euler"]["is_divergence"], true);

    let out = run("gfcohom descend --n 3 a2*t2".split_whitespace());
    assert_eq!(out.code, exit::RESOURCE_CAP);
    assert!(out.stderr.contains("--enable-3d"));
}

#[test]
fn descend_rejects_open_classes() {
    // a1 alone is d_CE-closed but its de Rham differential does not vanish.
    let out = run("gfcohom descend --n 1 a1".split_whitespace());
    assert_eq!(out.code, exit::PRECONDITION, "{}", out.stderr);
}

#[test]
fn compare_and_fault_injection() {
    let (code, v, _) = json("compare --n 1 --q-max 4");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["verdict"], "match");
    let (code, v, _) = json("compare --n 2 --q-max 5");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["rows"][5], serde_json::json!({"degree": 5, "engine": 2, "model": 2, "match": true}));
    let (code, v, _) = json("compare --n 1 --q-max 4 --inject-fault 1");
    assert_eq!(code, exit::MISMATCH);
    assert_eq!(v["results"]["verdict"], "mismatch");
}

#[test]
fn json_round_trips_and_is_deterministic() {
    for args in ["betti --n 2 --q-max 6", "verify --n 2 a1*t2 --seed 5", "descend --n 1 a1*t1", "compare --n 2 --q-max 5"] {
        let (_, v, text) = json(args);
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again, text, "{args}");
        assert_eq!(json(args).2, text, "{args}");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["certificates", "command", "config", "results", "timing"]);
    }
}

#[test]
fn csv_tables() {
    let out = run("gfcohom betti --n 1 --q-max 4 --format csv".split_whitespace());
    assert_eq!(out.stdout, "degree,dim\n1,0\n2,0\n3,1\n4,0\n");
    let out = run("gfcohom compare --n 1 --q-max 1 --format csv".split_whitespace());
    assert_eq!(out.stdout, "degree,engine,model,match\n0,1,1,match\n1,0,0,match\n");
}

#[test]
#[ignore = "about ten minutes in release"]
fn three_dimensional_cocycle() {
    let (code, v, _) = json("descend --n 3 --enable-3d a2*t2");
    assert_eq!(code, exit::SUCCESS);
    assert_eq!(v["results"]["integrand"]["terms"], 12864);
    assert_eq!(v["certificates"]["euler"]["is_divergence"], false);
    assert_eq!(v["certificates"]["euler"]["d_t_is_divergence"], true);
}
