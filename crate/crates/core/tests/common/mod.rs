#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spackle::circuit::{ErrorPattern, GateKind, SpacetimeCircuit};
use spackle::pauli::{Letter, PauliOp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ONE: [&str; 4] = ["I", "H", "SQRTZ", "Z"];
const TWO: [&str; 5] = ["CNOT", "CZ", "SWAP", "CP_Y", "CP_X"];

/// Random canonical circuit on at most `max_wires` wires and `max_steps` layers.
pub fn random_circuit(rng: &mut impl Rng, max_wires: usize, max_steps: u32, with_io: bool) -> SpacetimeCircuit {
    let nw = rng.gen_range(1..=max_wires);
    let mut c = SpacetimeCircuit::new(nw);
    if with_io {
        for w in 0..nw {
            if rng.gen_bool(0.3) {
                c.init(w).unwrap();
            }
        }
    }
    let steps = rng.gen_range(1..=max_steps);
    for step in 0..steps {
        let mut free: Vec<usize> = (0..nw).collect();
        while !free.is_empty() {
            let i = rng.gen_range(0..free.len());
            let a = free.swap_remove(i);
            if rng.gen_bool(0.25) {
                continue;
            }
            if !free.is_empty() && rng.gen_bool(0.5) {
                let j = rng.gen_range(0..free.len());
                let b = free.swap_remove(j);
                let name = TWO[rng.gen_range(0..TWO.len())];
                c.push_at(GateKind::from_name(name).unwrap(), &[a, b], step).unwrap();
            } else {
                let name = ONE[rng.gen_range(0..ONE.len())];
                c.push_at(GateKind::from_name(name).unwrap(), &[a], step).unwrap();
            }
        }
    }
    if c.gates().is_empty() {
        c.push_at(GateKind::H, &[0], 0).unwrap();
    }
    if with_io {
        for w in 0..nw {
            if rng.gen_bool(0.3) {
                c.post(w).unwrap();
            }
        }
    }
    c.pad_and_canonicalize()
}

pub fn random_letter(rng: &mut impl Rng, allow_identity: bool) -> Letter {
    let lo = if allow_identity { 0 } else { 1 };
    [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(lo..4)]
}

pub fn random_pauli(rng: &mut impl Rng, n: usize) -> PauliOp {
    let letters: Vec<Letter> = (0..n).map(|_| random_letter(rng, true)).collect();
    let mut p = PauliOp::from_letters(&letters);
    p.set_phase(p.hermitian_phase());
    p
}

pub fn random_pattern(rng: &mut impl Rng, c: &SpacetimeCircuit, weight: usize) -> ErrorPattern {
    let mut e = ErrorPattern::new();
    for _ in 0..weight {
        let w = rng.gen_range(0..c.num_wires());
        let t = rng.gen_range(0..=c.depth());
        e.insert(w, t, random_letter(rng, false));
    }
    e
}
