//! The `addcomb` binary: outputs, exit codes, and repeatability.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use addcomb::group::GroupSpec;
use common::Arith;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_addcomb")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn indices(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

fn frac(v: &Value) -> (u64, u64) {
    (v["num"].as_u64().unwrap(), v["den"].as_u64().unwrap())
}

#[test]
fn compute_s_of_an_interval() {
    let out = run(&["compute", "--group", "Z/100", "--set", "A={0,1,2,3,4}", "--quantity", "s", "--T", "inf"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["results"][0]["result"];
    assert_eq!(frac(&r["value"]), (8, 5));
    assert_eq!(r["exactness"], "exact");
    let (x, y) = (indices(&r["witness"]["X"]), indices(&r["witness"]["Y"]));
    let ar = Arith::new(&GroupSpec::cyclic(100).unwrap());
    assert!(x.iter().chain(&y).all(|&v| v <= 4));
    assert!(ar.is_direct(&x, &y));
    assert_eq!(x.len() * y.len(), 8);
}

#[test]
fn compute_doubling_and_energy() {
    let out = run(&["compute", "--group", "Z/6", "--set", "H={0,2,4}", "--quantity", "d"]);
    assert_eq!(code(&out), 0);
    assert_eq!(frac(&json(&out)["results"][0]["result"]["value"]), (1, 1));

    let out = run(&["compute", "--group", "Z/10", "--set", "A={0,1,2}", "--quantity", "energy", "--with", "B=A"]);
    assert_eq!(code(&out), 0);
    let ar = Arith::new(&GroupSpec::cyclic(10).unwrap());
    let e = ar.energy_quadruples(&[0, 1, 2], &[0, 1, 2]);
    assert_eq!(e, 19);
    assert_eq!(json(&out)["results"][0]["result"]["value"], Value::from(19u64));
}

#[test]
fn compute_from_file_as_csv_to_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let p = path.to_str().unwrap();
    let out = run(&["--format", "csv", "--out", p, "compute", "--file", &fixture("sidon16_z1024.set"), "--quantity", "d,K,k"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "quantity,A,B,T,value,exactness");
    // Sidon: |A+A| = 16*17/2, every nonzero shift overlaps at most once, no 3-term progression
    assert_eq!(lines[1], "d,A,B,,17/2,exact");
    assert_eq!(lines[2], "K,A,,,16,exact");
    assert_eq!(lines[3], "k,A,,,2,exact");
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["compute", "--group", "Z/1", "--set", "A={0}", "--quantity", "d"][..],
        &["compute", "--group", "Z/6", "--set", "A={6}", "--quantity", "d"],
        &["compute", "--group", "Z/6", "--set", "A={0,1", "--quantity", "d"],
        &["compute", "--group", "Z/6", "--set", "A={0}", "--quantity", "nonsense"],
        &["compute", "--group", "Z/6", "--set", "A={0}", "--quantity", "s", "--T", "1/2"],
        &["verify", "--family", "subsets(Z/12"],
        &["verify", "--family", "subsets(Z/12, max=3)", "--checks", "nothing"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_families() {
    let out = run(&["verify", "--family", "subsets(Z/12, max=6)", "--checks", "chain,dichotomy"]);
    assert_eq!(code(&out), 0);
    let s = &json(&out)["summary"];
    assert_eq!(s["instances"], 2509);
    assert!(s["failures"].as_array().unwrap().is_empty());

    let out = run(&["verify", "--family", "triples(Z/16, max=6, n=500, seed=7)", "--checks", "triangle"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["per_check"]["triangle.s"]["passed"], 1000);
}

#[test]
fn verify_csv_rows() {
    let out = run(&["--format", "csv", "verify", "--family", "subsets(Z/6, max=3)", "--checks", "ruzsa"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[1].starts_with("ruzsa,"));
}

#[test]
fn oversized_exhaustive_family_exits_3() {
    let out = run(&["verify", "--family", "subsets(Z/64, max=40)", "--checks", "chain"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn sidon_construction() {
    let out = run(&["construct", "sidon", "--group", "Z/101", "--size", "6", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verification"]["sidon"], true);
    let a = indices(&v["set"]);
    assert_eq!(a.len(), 6);
    let ar = Arith::new(&GroupSpec::cyclic(101).unwrap());
    assert!(ar.rep(&a, &a, true).iter().skip(1).all(|&c| c <= 1));
    assert_eq!(ar.sumset(&a, &a).len(), 21);
}

#[test]
fn direct_pair_trace() {
    let out = run(&["construct", "direct-pair-random", "--file", &fixture("random_z512.set"), "--kappa", "1/2", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let t = &json(&out)["trace"];
    assert_eq!(t["success"], true);
    for (k, v) in t["postconditions"].as_object().unwrap() {
        assert_eq!(v, true, "{k}");
    }
    let a_star: BTreeSet<usize> = indices(&t["a_star"]).into_iter().collect();
    let b_star = indices(&t["b_star"]);
    let ar = Arith::new(&GroupSpec::cyclic(512).unwrap());
    assert!(ar.is_direct(&a_star.into_iter().collect::<Vec<_>>(), &b_star));
}

#[test]
fn construction_failures_exit_4() {
    // no Sidon set of size 4 fits in Z/7
    assert_eq!(code(&run(&["construct", "sidon", "--group", "Z/7", "--size", "4"])), 4);
    // the size window for |B_*| is empty at this kappa
    let out = run(&["construct", "direct-pair-random", "--file", &fixture("mixed_z2048.set"), "--kappa", "1/4", "--seed", "1"]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["trace"]["success"], false);
}

#[test]
fn experiment_csv_and_trend() {
    let args = ["experiment", "random-S", "--group", "Z/256", "--deltas", "1/4,1/16", "--trials", "20", "--seed", "3"];
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,trials,exact_trials,median_size,median_s,median_s_float,implied_constant");
    assert!(lines[1].starts_with("1/4,20,"));
    assert!(lines[2].starts_with("1/16,20,"));
    assert_eq!(run(&args).stdout, out.stdout);

    // in Z/4 both densities give median S = 1, so the strict trend fails
    let out = run(&["experiment", "random-S", "--group", "Z/4", "--deltas", "1/2,1/4", "--trials", "3", "--seed", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--family", "triples(Z/20, max=5, n=50, seed=1)", "--checks", "all", "--reports"][..],
        &["construct", "direct-pair-random", "--file", &fixture("sidon64_z65536.set"), "--kappa", "1/2", "--seed", "9"],
        &["construct", "random", "--group", "F2^8", "--delta", "1/3", "--seed", "4"],
        &["--format", "json", "experiment", "random-S", "--group", "Z/64", "--deltas", "1/4", "--trials", "5"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(code(&a), code(&b));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["verify", "--help"])), 0);
}
