mod common;

use common::{random_circuit, rng};
use proptest::prelude::*;
use spackle::analysis::{verify_fault_tolerance, FtMode, Verdict};
use spackle::circuit::{parse_circuit, SpacetimeCircuit};

fn kind(v: &Verdict) -> (u8, usize) {
    match v {
        Verdict::Zero => (0, 0),
        Verdict::Reduced { e_prime } => (1, e_prime.weight()),
        Verdict::Violation { .. } => (2, 0),
    }
}

fn compare_modes(c: &SpacetimeCircuit, w: usize) {
    let s = verify_fault_tolerance(c, w, FtMode::Symbolic, true).unwrap();
    let e = verify_fault_tolerance(c, w, FtMode::Exact, true).unwrap();
    assert_eq!(s.patterns_checked, e.patterns_checked);
    for (a, b) in s.verdicts.iter().zip(&e.verdicts) {
        assert_eq!(a.pattern, b.pattern);
        assert_eq!(kind(&a.verdict), kind(&b.verdict), "{}: {} vs {}\n{}", a.pattern, a.verdict, b.verdict, c.to_text());
    }
}

#[test]
fn parity_check_is_not_fault_tolerant() {
    let c = parse_circuit("INIT 2\nCNOT 0 2\nCNOT 1 2\nPOST 2").unwrap().pad_and_canonicalize();
    let r = verify_fault_tolerance(&c, 1, FtMode::Exact, false).unwrap();
    assert!(!r.fault_tolerant);
    compare_modes(&c, 1);
}

#[test]
fn empty_circuit_is_vacuously_fault_tolerant() {
    let c = SpacetimeCircuit::new(0);
    let r = verify_fault_tolerance(&c, 2, FtMode::Symbolic, false).unwrap();
    assert!(r.fault_tolerant);
    assert_eq!(r.patterns_checked, 0);
}

#[test]
fn single_qubit_circuits_are_fault_tolerant() {
    let c = parse_circuit("I 0\nI 0\nH 1\nH 1").unwrap();
    let r = verify_fault_tolerance(&c, 2, FtMode::Symbolic, false).unwrap();
    assert!(r.fault_tolerant, "{:?}", r.violations.first());
    compare_modes(&c, 2);
    // a CNOT spreads one X into two
    let c = parse_circuit("CNOT 0 1\nI 0\nI 1").unwrap();
    let r = verify_fault_tolerance(&c, 1, FtMode::Symbolic, false).unwrap();
    assert!(!r.fault_tolerant);
}

#[test]
fn exact_mode_wire_cutoff() {
    let mut c = SpacetimeCircuit::new(13);
    for w in 0..13 {
        c.push(spackle::circuit::GateKind::I, &[w]).unwrap();
        c.push(spackle::circuit::GateKind::I, &[w]).unwrap();
    }
    let err = verify_fault_tolerance(&c, 1, FtMode::Exact, false).unwrap_err();
    assert!(matches!(err, spackle::Error::ResourceLimit(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn symbolic_agrees_with_dense(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_circuit(&mut r, 4, 4, true);
        compare_modes(&c, 1);
    }
}
