use super::build::SubsystemCode;
use super::index::SpacetimeQubitIndex;
use crate::circuit::{conjugate, ErrorPattern, SpacetimeCircuit};
use crate::error::{Error, Result};
use crate::pauli::{BinaryMatrix, PauliOp};

/// `η_t`: place a wire-level Pauli on the qubits holding time t.
pub fn eta(index: &SpacetimeQubitIndex, p: &PauliOp, t: u32) -> Result<PauliOp> {
    if p.num_qubits() != index.num_wires() {
        return Err(Error::LengthMismatch(p.num_qubits(), index.num_wires()));
    }
    let mut out = PauliOp::identity(index.num_qubits());
    for w in p.support() {
        let q = index.qubit(w, t).ok_or(Error::InvalidCoordinate { wire: w, time: t })?;
        out.set_letter(q, p.letter(w));
    }
    out.set_phase(p.phase());
    Ok(out)
}

/// Product over all time slices of the propagated images of `p`.
///
/// Returned with the Hermitian phase of its letters.
pub fn spack(c: &SpacetimeCircuit, p: &PauliOp) -> Result<PauliOp> {
    if p.num_qubits() != c.num_wires() {
        return Err(Error::LengthMismatch(p.num_qubits(), c.num_wires()));
    }
    let index = SpacetimeQubitIndex::new(c);
    spack_indexed(c, &index, p)
}

pub(crate) fn spack_indexed(c: &SpacetimeCircuit, index: &SpacetimeQubitIndex, p: &PauliOp) -> Result<PauliOp> {
    let mut out = PauliOp::identity(index.num_qubits());
    let mut cur = p.clone();
    let mut next_gate = 0;
    let gates = c.gates();
    for (q, &(w, t)) in index.coordinates().iter().enumerate() {
        // coordinates are time-major, so gates are applied incrementally
        while next_gate < gates.len() && gates[next_gate].step < t {
            let g = &gates[next_gate];
            conjugate(&mut cur, &g.kind, &g.wires, false);
            next_gate += 1;
        }
        out.set_letter(q, cur.letter(w));
    }
    out.set_phase(out.hermitian_phase());
    Ok(out)
}

/// Code operator of an error pattern; idle-step entries land on their segment.
pub fn pattern_operator(index: &SpacetimeQubitIndex, e: &ErrorPattern) -> Result<PauliOp> {
    let mut out = PauliOp::identity(index.num_qubits());
    for (w, t, l) in e.iter() {
        let q = index.qubit(w, t).ok_or(Error::InvalidCoordinate { wire: w, time: t })?;
        out.mul_assign_right(&PauliOp::single(index.num_qubits(), q, l));
    }
    Ok(out)
}

/// Error pattern placing each letter of a code operator at its segment start.
pub fn operator_pattern(index: &SpacetimeQubitIndex, op: &PauliOp) -> Result<ErrorPattern> {
    if op.num_qubits() != index.num_qubits() {
        return Err(Error::LengthMismatch(op.num_qubits(), index.num_qubits()));
    }
    let mut e = ErrorPattern::new();
    for q in op.support() {
        let (w, t) = index.coordinate(q);
        e.insert(w, t, op.letter(q));
    }
    Ok(e)
}

/// Result of sliding a spacetime Pauli back to time 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Squeegee {
    /// Wire-level operator at time 0.
    pub phi_wires: PauliOp,
    /// The same operator on code qubits.
    pub phi: PauliOp,
    /// Unitary-gate generators whose product equals `E · phi` up to phase.
    pub generators: Vec<usize>,
}

/// Slide an error pattern to the time-0 slice using unitary-gate generators.
pub fn squeegee(code: &SubsystemCode, e: &ErrorPattern) -> Result<Squeegee> {
    let op = pattern_operator(code.index(), e)?;
    squeegee_operator(code, &op)
}

pub fn squeegee_operator(code: &SubsystemCode, op: &PauliOp) -> Result<Squeegee> {
    let n = code.num_qubits();
    if op.num_qubits() != n {
        return Err(Error::LengthMismatch(op.num_qubits(), n));
    }
    let index = code.index();
    let c = code.circuit();
    let gens = code.gauge().generators();
    let mut r = op.clone();
    let mut used = Vec::new();
    for (gi, g) in c.gates().iter().enumerate().rev() {
        let outs: Vec<usize> = g.wires.iter().map(|&w| index.qubit(w, g.step + 1).expect("in range")).collect();
        let local = r.restrict(&outs);
        if local.is_identity_mod_phase() {
            continue;
        }
        let basis = code.gate_generators(gi);
        let rows = basis.iter().map(|(i, _)| gens[*i].restrict(&outs).to_symplectic()).collect();
        let m = BinaryMatrix::from_rows(rows, 2 * outs.len())?;
        let combo = m
            .rref(true)
            .express(&local.to_symplectic())
            .ok_or_else(|| Error::InvalidCode("gate generators do not span the output slots".into()))?;
        for j in combo.iter_ones() {
            let idx = basis[j].0;
            r.mul_assign_right(&gens[idx]);
            used.push(idx);
        }
    }
    let mut phi_wires = PauliOp::identity(index.num_wires());
    for w in 0..index.num_wires() {
        phi_wires.set_letter(w, r.letter(index.first_qubit(w)));
    }
    phi_wires.set_phase(r.phase());
    used.sort_unstable();
    Ok(Squeegee { phi_wires, phi: r, generators: used })
}

/// Whether `a·b` lies in the gauge group.
pub fn gauge_equivalent(code: &SubsystemCode, a: &PauliOp, b: &PauliOp, mod_phase: bool) -> Result<bool> {
    let prod = PauliOp::multiply(a, b)?;
    if prod.num_qubits() != code.num_qubits() {
        return Err(Error::LengthMismatch(prod.num_qubits(), code.num_qubits()));
    }
    Ok(code.gauge().contains(&prod, mod_phase))
}

/// One element of the overcomplete column set at a time slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnGenerator {
    /// Wire-level Pauli at time t.
    pub input: PauliOp,
    /// `η_{t+1}(U P U†) η_t(P)` on code qubits.
    pub op: PauliOp,
}

/// Largest wire count for which the full column set is listed.
pub const COLUMN_WIRE_LIMIT: usize = 8;

/// All `η_{t+1}(U P U†) η_t(P)` for nonidentity wire-level P, U the step-t layer.
pub fn column_generators(c: &SpacetimeCircuit, t: u32) -> Result<Vec<ColumnGenerator>> {
    if t >= c.depth() {
        return Err(Error::InvalidArgument(format!("slice {t} outside [0, {})", c.depth())));
    }
    let nw = c.num_wires();
    if nw > COLUMN_WIRE_LIMIT {
        return Err(Error::ResourceLimit(format!("column set on {nw} wires exceeds {COLUMN_WIRE_LIMIT}")));
    }
    let index = SpacetimeQubitIndex::new(c);
    let layer: Vec<_> = c.gates().iter().filter(|g| g.step == t).collect();
    let mut out = Vec::new();
    for code in 1u64..(1u64 << (2 * nw)) {
        let mut p = PauliOp::identity(nw);
        for w in 0..nw {
            let bits = (code >> (2 * w)) & 3;
            p.set_letter(w, crate::pauli::Letter::from_bits(bits & 1 == 1, bits & 2 == 2));
        }
        p.set_phase(p.hermitian_phase());
        let mut img = p.clone();
        for g in &layer {
            conjugate(&mut img, &g.kind, &g.wires, false);
        }
        let op = eta(&index, &img, t + 1)?.mul(&eta(&index, &p, t)?);
        out.push(ColumnGenerator { input: p, op });
    }
    Ok(out)
}

/// Per code qubit, the time-0 pullbacks of X and Z placed at its coordinate.
pub(crate) fn time_zero_pullbacks(c: &SpacetimeCircuit, index: &SpacetimeQubitIndex) -> Vec<[PauliOp; 2]> {
    let nw = c.num_wires();
    index
        .coordinates()
        .iter()
        .map(|&(w, t)| {
            [
                c.pull_back(&PauliOp::single(nw, w, crate::pauli::Letter::X), t),
                c.pull_back(&PauliOp::single(nw, w, crate::pauli::Letter::Z), t),
            ]
        })
        .collect()
}
