use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spackle")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s513.stab"), "XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n").unwrap();
    fs::write(dir.path().join("c422.stab"), "XXXX\nZZZZ\n").unwrap();
    fs::write(dir.path().join("zzz.stab"), "ZZZ\n").unwrap();
    dir
}

#[test]
fn sparsify_513() {
    let dir = setup();
    let o = run(dir.path(), &["sparsify", "--stabilizers", "s513.stab", "--max-distance", "3", "--policy", "complete", "--seed", "7", "--out-code", "out.code", "--out-circuit", "out.circ"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["tool"], "spackle");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["report"]["summary"]["k"], 1);
    assert_eq!(r["report"]["summary"]["distance"], "3");
    assert!(fs::read_to_string(dir.path().join("out.code")).unwrap().starts_with("n "));
    // the written code analyzes to the same parameters
    let a = run(dir.path(), &["analyze", "--code", "out.code", "--max-distance", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["report"]["summary"]["distance"], "3");
}

#[test]
fn sparsify_radius_and_inputs() {
    let dir = setup();
    let o = run(dir.path(), &["sparsify", "--stabilizers", "s513.stab", "--max-distance", "1", "--policy", "complete"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["summary"]["distance"], "> 1");
    assert_eq!(run(dir.path(), &["sparsify", "--stabilizers", "missing.stab"]).status.code(), Some(1));
    fs::write(dir.path().join("bad.stab"), "XX\nXXX\n").unwrap();
    assert_eq!(run(dir.path(), &["sparsify", "--stabilizers", "bad.stab"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(1));
}

#[test]
fn digests_ignore_formatting() {
    let dir = setup();
    fs::write(dir.path().join("c422b.stab"), "# same code\n n 4\n+XXXX   \n\nZZZZ # z\n").unwrap();
    let a = json(&run(dir.path(), &["ed-circuit", "--stabilizers", "c422.stab"]));
    let b = json(&run(dir.path(), &["ed-circuit", "--stabilizers", "c422b.stab"]));
    assert_eq!(a["inputs"][0]["sha256"], b["inputs"][0]["sha256"]);
}

#[test]
fn analyze_examples() {
    let dir = setup();
    // Bacon-Shor 3x3, qubit 3r+c
    let mut gauge = String::new();
    for r in 0..2 {
        for c in 0..3 {
            let mut s = vec!['I'; 9];
            s[3 * r + c] = 'X';
            s[3 * (r + 1) + c] = 'X';
            gauge += &format!("{}\n", s.iter().collect::<String>());
        }
    }
    for r in 0..3 {
        for c in 0..2 {
            let mut s = vec!['I'; 9];
            s[3 * r + c] = 'Z';
            s[3 * r + c + 1] = 'Z';
            gauge += &format!("{}\n", s.iter().collect::<String>());
        }
    }
    fs::write(dir.path().join("bs.code"), gauge).unwrap();
    let o = run(dir.path(), &["analyze", "--code", "bs.code"]);
    assert_eq!(o.status.code(), Some(0));
    let s = &json(&o)["report"]["summary"];
    assert_eq!((s["k"].as_u64(), s["distance"].as_str(), s["s_g"].as_u64()), (Some(1), Some("3"), Some(2)));

    fs::write(dir.path().join("empty.code"), "n 3\n").unwrap();
    let s = json(&run(dir.path(), &["analyze", "--code", "empty.code"]))["report"]["summary"].clone();
    assert_eq!((s["k"].as_u64(), s["distance"].as_str()), (Some(3), Some("1")));

    fs::write(dir.path().join("bad.code"), "XX\nXXX\n").unwrap();
    assert_eq!(run(dir.path(), &["analyze", "--code", "bad.code"]).status.code(), Some(1));
}

#[test]
fn verify_gadgets() {
    let dir = setup();
    assert_eq!(run(dir.path(), &["gadget", "--pauli", "ZZZ", "--out", "g3.circ"]).status.code(), Some(0));
    let o = run(dir.path(), &["verify", "--circuit", "g3.circ", "--base", "zzz.stab", "--max-weight", "2", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["report"]["good_ed"]["good"], true);
    assert_eq!(r["report"]["fault_tolerance"]["undetectable_violations"].as_array().unwrap().len(), 0);
    // the literal definition is not met; --strict reports it
    assert!(!r["report"]["fault_tolerance"]["violations"].as_array().unwrap().is_empty());
    let o = run(dir.path(), &["verify", "--circuit", "g3.circ", "--max-weight", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(2));

    // sabotage: vertex 2 no longer touches edge wire 7
    let text = fs::read_to_string(dir.path().join("g3.circ")).unwrap();
    let line = text.lines().find(|l| l.starts_with("HFANOUT4.ZXX 5 2 7 8")).expect("vertex 2 fan-out");
    let step = line.split('@').nth(1).unwrap().trim();
    fs::write(dir.path().join("bad.circ"), text.replace(line, &format!("HFANOUT3.ZX 5 2 8 @ {step}"))).unwrap();
    let o = run(dir.path(), &["verify", "--circuit", "bad.circ", "--max-weight", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("undetectable violation: X"));

    // 13 wires exceed the dense oracle
    let wide: String = (0..13).map(|w| format!("I {w}\nI {w}\n")).collect();
    fs::write(dir.path().join("wide.circ"), wide).unwrap();
    let o = run(dir.path(), &["verify", "--circuit", "wide.circ", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn path_gadget_fails() {
    let dir = setup();
    let o = run(dir.path(), &["gadget", "--pauli", "ZZZZ", "--graph", "path", "--out", "p4.circ"]);
    assert_eq!(json(&o)["report"]["expansion"], "1/2");
    let o = run(dir.path(), &["verify", "--circuit", "p4.circ", "--max-weight", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gadget_report() {
    let dir = setup();
    let r = json(&run(dir.path(), &["gadget", "--pauli", "-XYZ"]));
    assert_eq!(r["report"]["accounting"]["total"], 29);
    assert!(r["report"]["s_g"].as_u64().unwrap() <= 5);
    let r = json(&run(dir.path(), &["gadget", "--pauli", "ZZZZZZZ", "--graph", "random6", "--seed", "3"]));
    assert!(r["report"]["s_g"].as_u64().unwrap() <= 9);
    assert!(r["report"]["s_q"].as_u64().unwrap() <= 7);
    assert_eq!(run(dir.path(), &["gadget", "--pauli", "ZZ", "--graph", "0-1,2"]).status.code(), Some(1));
}

#[test]
fn ed_circuit_is_good() {
    let dir = setup();
    let o = run(dir.path(), &["ed-circuit", "--stabilizers", "c422.stab", "--out", "ed.circ"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["gadgets"].as_array().unwrap().len(), 2);
    let o = run(dir.path(), &["verify", "--circuit", "ed.circ", "--base", "c422.stab", "--max-weight", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["good_ed"]["good"], true);
}

#[test]
fn concat_and_plan() {
    let dir = setup();
    let o = run(dir.path(), &["concat", "--stabilizers", "s513.stab", "--levels", "2", "--dimension", "2", "--table", "plan.csv", "--out-code", "c25.stab"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!((r["report"]["generators"].as_u64(), r["report"]["rank"].as_u64()), (Some(24), Some(24)));
    assert_eq!(r["report"]["plan"]["final_level_dominates"], true);
    assert_eq!(fs::read_to_string(dir.path().join("plan.csv")).unwrap().lines().count(), 3);
    assert_eq!(fs::read_to_string(dir.path().join("c25.stab")).unwrap().lines().count(), 25);
    assert_eq!(run(dir.path(), &["concat", "--stabilizers", "c422.stab", "--levels", "2"]).status.code(), Some(1));
}

#[test]
fn localize_422() {
    let dir = setup();
    let args = ["localize", "--stabilizers", "c422.stab", "--dimension", "2", "--max-distance", "2", "--policy", "complete", "--seed", "1", "--out-spec", "spec.json", "--placement", "place.csv"];
    let a = run(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let r = json(&a);
    assert_eq!(r["report"]["local"], true);
    assert_eq!(r["report"]["summary"]["k"], 2);
    assert_eq!(r["report"]["summary"]["distance"], "2");
    assert_eq!(r["report"]["d_preserved"], true);
    let spec1 = fs::read(dir.path().join("spec.json")).unwrap();
    let b = run(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(spec1, fs::read(dir.path().join("spec.json")).unwrap());
    assert!(fs::read_to_string(dir.path().join("place.csv")).unwrap().starts_with("wire,x0"));
    assert_eq!(run(dir.path(), &["localize", "--stabilizers", "c422.stab", "--dimension", "1"]).status.code(), Some(1));
}

#[test]
fn gv_command() {
    let dir = setup();
    let r = json(&run(dir.path(), &["gv", "--n", "5", "--k", "1", "--d", "3"]));
    assert_eq!((r["report"]["gv"]["sum"].as_str(), r["report"]["gv"]["exists"].as_bool()), (Some("106"), Some(false)));
    let r = json(&run(dir.path(), &["gv", "--n", "100", "--k", "1", "--d", "3", "--n0", "5", "--delta", "3/5"]));
    assert_eq!(r["report"]["gv"]["sum"], "44851");
    assert_eq!(r["report"]["gv"]["exists"], true);
    let rows = r["report"]["epsilon"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|x| x["holds"] == true));
    assert_eq!(run(dir.path(), &["gv"]).status.code(), Some(1));
}
