use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_roapprox"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], input: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(p) = input {
        c.arg("--input").arg(p);
    }
    c.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

const TRI: &str = "p 3 3\ne 1 2\ne 2 3\ne 1 3\n";
const C6: &str = "p 6 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 1\n";

#[test]
fn triangle_report() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.gr", TRI);
    let out = run(&["solve", "--problem", "vc", "--algorithm", "bounded-degree", "--compare-exact"], Some(&tri));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["valid"], true);
    assert_eq!(r["size"], 2);
    assert_eq!(r["opt"], 2);
    assert_eq!(r["ratio"], 1.0);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = ["algorithm", "params", "solution", "size", "valid", "opt", "ratio", "meter", "runtime_ms"];
    want.sort();
    assert_eq!(keys, want);
    for k in ["charged_peak_words", "primitive_words", "input_accesses", "pass_estimate"] {
        assert!(r["meter"][k].is_u64(), "{k}");
    }
}

#[test]
fn staggered_hitting_set_is_valid() {
    let dir = TempDir::new().unwrap();
    let fam = write(&dir, "fam.hg", "h 6 5 3\ns 1 2 3\ns 3 4\ns 4 5 6\ns 1 6\ns 2 5\n");
    let out = run(&["solve", "--problem", "hs", "--algorithm", "staggered", "--epsilon", "1.0"], Some(&fam));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);
}

#[test]
fn regular_ds_on_c6() {
    let dir = TempDir::new().unwrap();
    let c6 = write(&dir, "c6.gr", C6);
    let out = run(&["solve", "--problem", "ds", "--algorithm", "regular", "--check-structure"], Some(&c6));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["valid"], true);
    assert!(r["size"].as_u64().unwrap() <= 4);
}

#[test]
fn gen_regular_validates_and_is_deterministic() {
    let a = run(&["gen", "regular", "n=8", "d=3", "seed=7"], None);
    let b = run(&["gen", "regular", "--n", "8", "--d", "3", "--seed", "7"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "r.gr", std::str::from_utf8(&a.stdout).unwrap());
    let v = run(&["validate", "--structure", "regular", "--d", "3"], Some(&g));
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["ok"], true);
}

#[test]
fn infeasible_gen_is_a_usage_error() {
    let out = run(&["gen", "regular", "n=7", "d=3"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn budget_no_exits_two() {
    let dir = TempDir::new().unwrap();
    let c6 = write(&dir, "c6.gr", C6);
    let out = run(&["solve", "--problem", "ds", "--algorithm", "c4free", "--k", "1"], Some(&c6));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "NO");
    let kern = run(&["kernel", "--problem", "vc", "--k", "2"], Some(&c6));
    assert_eq!(kern.status.code(), Some(2));
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.gr", "p 3 1\ne 1 9\n");
    let out = run(&["solve", "--problem", "vc", "--algorithm", "bounded-degree"], Some(&bad));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let c6 = write(&dir, "c6.gr", C6);
    let out = run(&["solve", "--problem", "vc", "--algorithm", "tree", "--check-structure"], Some(&c6));
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["solve", "--problem", "vc", "--algorithm", "nope"], Some(&c6));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["solve", "--bogus"], None).status.code(), Some(1));
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = run(&["gen", "graph", "n=12", "delta=3", "seed=4"], None);
    let g = write(&dir, "g.gr", std::str::from_utf8(&g.stdout).unwrap());
    let args = ["solve", "--problem", "mis", "--algorithm", "bounded-degree", "--space-audit", "--compare-exact"];
    let strip = |o: Output| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("runtime_ms");
        v.to_string()
    };
    let a = strip(run(&args, Some(&g)));
    assert_eq!(a, strip(run(&args, Some(&g))));
    assert!(a.contains("\"valid\":true"));
}

#[test]
fn candidate_validation() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.gr", TRI);
    let ok = run(&["validate", "--problem", "vc", "--candidate", "1,2"], Some(&tri));
    assert_eq!(ok.status.code(), Some(0));
    let no = run(&["validate", "--problem", "vc", "--candidate", "1"], Some(&tri));
    assert_eq!(no.status.code(), Some(2));
    assert!(json(&no)["witness"].as_str().unwrap().contains("UncoveredEdge"));
}
