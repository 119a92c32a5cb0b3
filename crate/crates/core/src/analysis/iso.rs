use serde::{Deserialize, Serialize};

use super::code::CodeAnalysis;
use crate::circuit::SpacetimeCircuit;
use crate::codemap::{spack_indexed, SubsystemCode};
use crate::error::{Error, Result};
use crate::pauli::{BinaryMatrix, BitVec, Letter, PauliGroup, PauliOp};

/// Lift of one base operator into the compiled code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub base: PauliOp,
    /// Ancilla Z pattern Q, when a solution exists.
    pub ancilla_z: Option<PauliOp>,
    /// Unique up to patterns whose spackle is a stabilizer.
    pub unique: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismReport {
    pub pass: bool,
    pub k: usize,
    pub k0: usize,
    pub stabilizer_rank: usize,
    pub base_rank: usize,
    pub stabilizers: Vec<Lift>,
    pub logicals: Vec<Lift>,
    pub failures: Vec<String>,
}

fn wire_op(c: &SpacetimeCircuit, data: &[usize], ancillas: &[usize], base: &PauliOp, q: &BitVec) -> PauliOp {
    let mut p = PauliOp::identity(c.num_wires());
    for (j, &w) in data.iter().enumerate() {
        p.set_letter(w, base.letter(j));
    }
    for (j, &a) in ancillas.iter().enumerate() {
        if q.get(j) {
            p.set_letter(a, Letter::Z);
        }
    }
    p
}

fn ancilla_z(n_a: usize, q: &BitVec) -> PauliOp {
    let mut p = PauliOp::identity(n_a);
    for j in q.iter_ones() {
        p.set_letter(j, Letter::Z);
    }
    p
}

/// Check that base stabilizers and logicals lift through `spack` with an
/// ancilla Z pattern, and that the counts agree.
pub fn verify_isomorphism(code: &SubsystemCode, base: &PauliGroup) -> Result<IsomorphismReport> {
    let c = code.circuit();
    let index = code.index();
    let data = c.data_wires();
    let ancillas = c.init_wires();
    if data.len() != base.num_qubits() {
        return Err(Error::LengthMismatch(data.len(), base.num_qubits()));
    }
    let n = code.num_qubits();
    let n_a = ancillas.len();
    let a = CodeAnalysis::new(code.gauge());
    let st = a.structure();
    let stabs = a.stabilizers();
    let b = CodeAnalysis::new(base);
    let bst = b.structure();
    let mut failures = Vec::new();

    let zero_q = BitVec::zeros(n_a);
    let anc_spacks: Vec<BitVec> = (0..n_a)
        .map(|j| {
            let q = BitVec::from_ones(n_a, [j]);
            let p = wire_op(c, &data, &ancillas, &PauliOp::identity(data.len()), &q);
            spack_indexed(c, index, &p).map(|s| s.to_symplectic())
        })
        .collect::<Result<_>>()?;

    // (a) s ⊗ Q lands in the stabilizer group for some Q
    let mut rows: Vec<BitVec> = stabs.generators().iter().map(|s| s.to_symplectic()).collect();
    let r_s = rows.len();
    rows.extend(anc_spacks.iter().cloned());
    let solver = BinaryMatrix::from_rows(rows, 2 * n)?.rref(true);
    let mut stab_lifts = Vec::new();
    for s in base.generators() {
        let v = spack_indexed(c, index, &wire_op(c, &data, &ancillas, s, &zero_q))?.to_symplectic();
        let lift = match solver.express(&v) {
            Some(combo) => {
                let q = BitVec::from_ones(n_a, combo.iter_ones().filter(|&i| i >= r_s).map(|i| i - r_s));
                Lift { base: s.clone(), ancilla_z: Some(ancilla_z(n_a, &q)), unique: true }
            }
            None => {
                failures.push(format!("no ancilla pattern lifts stabilizer {s}"));
                Lift { base: s.clone(), ancilla_z: None, unique: false }
            }
        };
        stab_lifts.push(lift);
    }

    // (b) ℓ ⊗ Q commutes with every generator for exactly one Q
    let gens = code.gauge().generators();
    let syndrome = |v: &BitVec| -> BitVec {
        let p = PauliOp::from_symplectic(v, 0);
        BitVec::from_bools(&gens.iter().map(|g| !g.commutes(&p)).collect::<Vec<_>>())
    };
    let anc_syn: Vec<BitVec> = anc_spacks.iter().map(syndrome).collect();
    let syn_matrix = BinaryMatrix::from_rows(anc_syn, gens.len())?;
    let syn_solver = syn_matrix.rref(true);
    // Q is unique up to ancilla patterns whose spackle is a stabilizer
    let mut unique = true;
    for q in syn_matrix.transpose().null_space() {
        let p = spack_indexed(c, index, &wire_op(c, &data, &ancillas, &PauliOp::identity(data.len()), &q))?;
        if !stabs.contains(&p, true) {
            failures.push(format!("ancilla pattern {} commutes with the gauge group but is not a stabilizer", ancilla_z(n_a, &q)));
            unique = false;
            break;
        }
    }
    let mut logical_lifts = Vec::new();
    for (x, z) in b.bare_logicals() {
        for l in [x, z] {
            let v = spack_indexed(c, index, &wire_op(c, &data, &ancillas, &l, &zero_q))?.to_symplectic();
            let lift = match syn_solver.express(&syndrome(&v)) {
                Some(q) => {
                    let lifted = spack_indexed(c, index, &wire_op(c, &data, &ancillas, &l, &q))?;
                    if code.gauge().contains(&lifted, true) {
                        failures.push(format!("lift of logical {l} lies in the gauge group"));
                    }
                    Lift { base: l.clone(), ancilla_z: Some(ancilla_z(n_a, &q)), unique }
                }
                None => {
                    failures.push(format!("no ancilla pattern lifts logical {l}"));
                    Lift { base: l.clone(), ancilla_z: None, unique: false }
                }
            };
            logical_lifts.push(lift);
        }
    }

    // (c) counts
    if st.k != bst.k {
        failures.push(format!("k = {} but base has k0 = {}", st.k, bst.k));
    }
    let lifted = stab_lifts.iter().filter(|l| l.ancilla_z.is_some()).count();
    if lifted != base.len() {
        failures.push(format!("{lifted} of {} base stabilizer generators lifted", base.len()));
    }
    let lifted = logical_lifts.iter().filter(|l| l.ancilla_z.is_some() && l.unique).count();
    if lifted != 2 * bst.k {
        failures.push(format!("{lifted} logicals lifted uniquely, base has 2 k0 = {}", 2 * bst.k));
    }
    Ok(IsomorphismReport {
        pass: failures.is_empty(),
        k: st.k,
        k0: bst.k,
        stabilizer_rank: st.r,
        base_rank: bst.r,
        stabilizers: stab_lifts,
        logicals: logical_lifts,
        failures,
    })
}
