use std::fmt;

use serde::{Deserialize, Serialize};

use super::ir::SpacetimeCircuit;
use crate::error::{Error, Result};
use crate::pauli::{BinaryMatrix, BitVec, Letter, PauliGroup, PauliOp};

/// Exact acceptance probability: zero or a power of 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcceptProb {
    Zero,
    /// 2^-k
    InvPow2(u32),
}

impl AcceptProb {
    pub fn value(&self) -> f64 {
        match self {
            AcceptProb::Zero => 0.0,
            AcceptProb::InvPow2(k) => 0.5f64.powi(*k as i32),
        }
    }
}

impl fmt::Display for AcceptProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcceptProb::Zero => f.write_str("0"),
            AcceptProb::InvPow2(0) => f.write_str("1"),
            AcceptProb::InvPow2(k) => write!(f, "2^-{k}"),
        }
    }
}

/// `U† Z_p U` for every postselected wire p, in wire order.
pub fn post_pullbacks(c: &SpacetimeCircuit) -> Vec<PauliOp> {
    let nw = c.num_wires();
    c.post_wires()
        .iter()
        .map(|&p| c.conjugate_full(&PauliOp::single(nw, p, Letter::Z), true))
        .collect()
}

/// Exact probability that every postselection succeeds when the data
/// wires start in the stabilizer state of `input` and ancillas in `|0>`.
pub fn simulate_accept_prob(c: &SpacetimeCircuit, input: &PauliGroup) -> Result<AcceptProb> {
    let data = c.data_wires();
    if input.num_qubits() != data.len() {
        return Err(Error::LengthMismatch(input.num_qubits(), data.len()));
    }
    let nw = c.num_wires();
    let mut gens: Vec<PauliOp> = input.generators().iter().map(|g| PauliOp::embed(nw, &data, g)).collect();
    for w in c.init_wires() {
        gens.push(PauliOp::single(nw, w, Letter::Z));
    }
    let state = PauliGroup::new(nw, gens)?;
    if state.rank() != nw {
        return Err(Error::Underdetermined(format!(
            "input stabilizers have rank {} on {} data wires",
            input.rank(),
            data.len()
        )));
    }
    if state.contains_minus_identity() {
        return Err(Error::InvalidArgument("input stabilizer group contains -I".into()));
    }
    let pulls = post_pullbacks(c);
    accept_from_pullbacks(&state, &pulls)
}

/// Acceptance given a full-rank stabilizer state and the pulled-back
/// postselection generators.
pub(crate) fn accept_from_pullbacks(state: &PauliGroup, pulls: &[PauliOp]) -> Result<AcceptProb> {
    let gens = state.generators();
    let rows: Vec<BitVec> = pulls
        .iter()
        .map(|u| BitVec::from_bools(&gens.iter().map(|s| !u.commutes(s)).collect::<Vec<_>>()))
        .collect();
    let b = BinaryMatrix::from_rows(rows, gens.len())?;
    let rr = b.rref(true);
    for dep in rr.dependencies() {
        let mut q = PauliOp::identity(state.num_qubits());
        for p in dep.iter_ones() {
            q.mul_assign_right(&pulls[p]);
        }
        if state.contains(&q, false) {
            continue;
        }
        if state.contains(&q.negated(), false) {
            return Ok(AcceptProb::Zero);
        }
        return Err(Error::InvalidArgument("inconsistent stabilizer expectation".into()));
    }
    Ok(AcceptProb::InvPow2(rr.rank as u32))
}
