mod common;

use common::{random_circuit, random_pauli, rng};
use proptest::prelude::*;
use spackle::analysis::{analyze, sparsity, CodeAnalysis};
use spackle::circuit::parse_circuit;
use spackle::codemap::{build_code, spack};
use spackle::pauli::{Letter, PauliGroup, PauliOp};

fn bacon_shor() -> PauliGroup {
    let mut gens = Vec::new();
    for r in 0..3 {
        for c in 0..2 {
            gens.push(PauliOp::on(9, &[3 * r + c, 3 * r + c + 1], Letter::X));
        }
    }
    for r in 0..2 {
        for c in 0..3 {
            gens.push(PauliOp::on(9, &[3 * r + c, 3 * r + c + 3], Letter::Z));
        }
    }
    PauliGroup::new(9, gens).unwrap()
}

/// Brute-force minimum weight over every Pauli on n qubits.
fn brute_distance(g: &PauliGroup, literal: bool) -> Option<usize> {
    let n = g.num_qubits();
    let stabs = CodeAnalysis::new(g).stabilizers();
    let target = if literal { &stabs } else { g };
    let mut best: Option<usize> = None;
    for code in 1u64..(1u64 << (2 * n)) {
        let mut p = PauliOp::identity(n);
        for q in 0..n {
            let b = (code >> (2 * q)) & 3;
            p.set_letter(q, Letter::from_bits(b & 1 == 1, b & 2 == 2));
        }
        if best.is_some_and(|b| p.weight() >= b) {
            continue;
        }
        if stabs.generators().iter().all(|s| s.commutes(&p)) && !target.contains(&p, true) {
            best = Some(p.weight());
        }
    }
    best
}

#[test]
fn bacon_shor_report() {
    let g = bacon_shor();
    let a = CodeAnalysis::new(&g);
    let st = a.structure();
    assert_eq!((st.n, st.r, st.g, st.k), (9, 4, 4, 1));
    assert!(a.stabilizers().generators().iter().all(|s| s.weight() == 6));
    let r = analyze(&g, None, None).unwrap();
    assert_eq!((r.k, r.d, r.d_is_exact, r.s_g), (1, Some(3), true, 2));
    assert_eq!(r.d, brute_distance(&g, false));
    // gauge operators of weight 2 are in N(S) but not in S
    assert_eq!(r.d_literal, Some(2));
    assert_eq!(r.d_literal, brute_distance(&g, true));
    let w: PauliOp = r.witness.unwrap().parse().unwrap();
    assert_eq!(w.weight(), 3);
}

#[test]
fn five_qubit_code_and_radius() {
    let g = PauliGroup::parse(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
    let r = analyze(&g, Some(1), None).unwrap();
    assert!(!r.d_is_exact);
    assert_eq!(r.distance_display(), "> 1");
    assert_eq!(r.d, Some(2));
    let r = analyze(&g, Some(3), Some(2)).unwrap();
    assert_eq!((r.k, r.d, r.d_is_exact), (1, Some(3), true));
    assert_eq!(r.stabilizer_weights, vec![4, 4, 4, 4]);
    // lexicographically first witness is stable across thread counts
    let again = analyze(&g, Some(3), Some(1)).unwrap();
    assert_eq!(again.witness, r.witness);
}

#[test]
fn empty_gauge_group() {
    let g = PauliGroup::trivial(4);
    let r = analyze(&g, None, None).unwrap();
    assert_eq!((r.n, r.k, r.d), (4, 4, Some(1)));
}

#[test]
fn identity_wire_code() {
    let c = parse_circuit("I 0\nI 0").unwrap();
    let code = build_code(&c).unwrap();
    let a = CodeAnalysis::new(code.gauge());
    assert_eq!(a.stabilizers().rank(), 0);
    let pairs = a.bare_logicals();
    assert_eq!(pairs.len(), 1);
    let mut ops: Vec<String> = vec![pairs[0].0.to_string(), pairs[0].1.to_string()];
    ops.sort();
    assert_eq!(ops, vec!["XXX", "ZZZ"]);
    // the middle qubit meets XX and ZZ from both gates
    assert_eq!(sparsity(code.gauge()), (2, 4));
}

#[test]
fn cnot_code_sparsity() {
    let c = parse_circuit("CNOT 0 1\nI 0\nI 1").unwrap();
    // rows XX|XI, II|XX, ZZ|II, ZI|ZZ
    assert_eq!(sparsity(build_code(&c).unwrap().gauge()).0, 3);
}

#[test]
fn inits_give_spackle_stabilizers() {
    let c = parse_circuit("INIT 1\nH 0\nCNOT 0 1\nSQRTZ 1\nI 0").unwrap().pad_and_canonicalize();
    let code = build_code(&c).unwrap();
    let s = CodeAnalysis::new(code.gauge()).stabilizers();
    assert_eq!(s.rank(), 1);
    let z1 = spack(&c, &"IZ".parse().unwrap()).unwrap();
    assert!(s.contains(&z1, true));
}

#[test]
fn weight_one_gauge_generator() {
    let g = PauliGroup::parse(&["ZII", "XXI"]).unwrap();
    let a = CodeAnalysis::new(&g);
    let d = a.distance(Some(1), None).unwrap();
    let z0: PauliOp = "ZII".parse().unwrap();
    assert_ne!(d.witness.map(|w| w.unsigned()), Some(z0));
}

fn random_group(seed: u64) -> PauliGroup {
    let mut r = rng(seed);
    let n = 2 + (seed % 4) as usize;
    let m = (seed / 7 % 5) as usize;
    let gens = (0..m).map(|_| random_pauli(&mut r, n)).filter(|p| !p.is_identity_mod_phase()).collect();
    PauliGroup::new(n, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_matches_brute_force(seed in any::<u64>()) {
        let g = random_group(seed);
        let a = CodeAnalysis::new(&g);
        let d = a.distance(None, None).unwrap();
        prop_assert_eq!(d.exact, brute_distance(&g, false));
        let lit = a.distance_literal(None, None).unwrap();
        prop_assert_eq!(lit.exact, brute_distance(&g, true));
        if let Some(w) = d.witness {
            prop_assert!(!g.contains(&w, true));
        }
    }

    #[test]
    fn stabilizers_and_logicals_commute_with_gauge(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_circuit(&mut r, 4, 6, true);
        let code = build_code(&c).unwrap();
        let g = code.gauge();
        let a = CodeAnalysis::new(g);
        for s in a.stabilizers().generators() {
            prop_assert!(g.generators().iter().all(|x| x.commutes(s)));
        }
        let pairs = a.bare_logicals();
        prop_assert_eq!(pairs.len(), a.structure().k);
        for (x, z) in &pairs {
            prop_assert!(!x.commutes(z));
            for l in [x, z] {
                prop_assert!(g.generators().iter().all(|y| y.commutes(l)));
                prop_assert!(!g.contains(l, true));
            }
        }
    }

    #[test]
    fn bounded_search_is_monotone(seed in any::<u64>()) {
        let g = random_group(seed);
        let a = CodeAnalysis::new(&g);
        let full = a.distance(None, None).unwrap();
        for w in 1..=g.num_qubits() {
            let part = a.distance(Some(w), None).unwrap();
            if let (Some(bound), false) = (part.value(), part.is_exact()) {
                prop_assert!(full.exact.is_none_or(|d| d >= bound));
            }
        }
    }
}
