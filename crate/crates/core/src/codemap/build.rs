use std::fmt;

use serde::{Deserialize, Serialize};

use super::index::SpacetimeQubitIndex;
use crate::circuit::{conjugate, SpacetimeCircuit};
use crate::error::{Error, Result};
use crate::pauli::{BinaryMatrix, Letter, PauliGroup, PauliOp};

/// How each unitary-gate generator is written.
///
/// `Forward` emits `η_{t+1}(U Q U†) η_t(Q)` for single-slot Q, the form of
/// the gate dictionary. `Balanced` may instead emit the equivalent
/// `η_{t+1}(Q) η_t(U† Q U)` for some slots, chosen greedily to lower the
/// largest per-qubit incidence, and may use a Y row in place of an X or Z
/// row when its images are lighter. Both generate the same gauge group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    Forward,
    Balanced,
}

/// Source of a gauge generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Gate { gate: usize, slot: usize, letter: Letter, step: u32, backward: bool },
    Init { wire: usize },
    Post { wire: usize },
}

impl Provenance {
    pub fn is_unitary(&self) -> bool {
        matches!(self, Provenance::Gate { .. })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Gate { gate, slot, letter, step, backward } => {
                let dir = if *backward { "bwd" } else { "fwd" };
                write!(f, "gate:{gate}@{step}.5:slot{slot}:{}:{dir}", letter.to_char())
            }
            Provenance::Init { wire } => write!(f, "init:{wire}"),
            Provenance::Post { wire } => write!(f, "post:{wire}"),
        }
    }
}

/// Subsystem code compiled from a canonical circuit.
#[derive(Clone, Debug)]
pub struct SubsystemCode {
    circuit: SpacetimeCircuit,
    index: SpacetimeQubitIndex,
    gauge: PauliGroup,
    provenance: Vec<Provenance>,
    /// Per gate: (generator index, local pre-image on the gate's input slots).
    gate_gens: Vec<Vec<(usize, PauliOp)>>,
}

impl SubsystemCode {
    pub fn circuit(&self) -> &SpacetimeCircuit {
        &self.circuit
    }

    pub fn index(&self) -> &SpacetimeQubitIndex {
        &self.index
    }

    pub fn gauge(&self) -> &PauliGroup {
        &self.gauge
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn num_qubits(&self) -> usize {
        self.index.num_qubits()
    }

    pub(crate) fn gate_generators(&self, gate: usize) -> &[(usize, PauliOp)] {
        &self.gate_gens[gate]
    }

    /// Indices of generators coming from unitary gates.
    pub fn unitary_generators(&self) -> Vec<usize> {
        (0..self.provenance.len()).filter(|&i| self.provenance[i].is_unitary()).collect()
    }
}

struct Candidate {
    gate: usize,
    slot: usize,
    letter: Letter,
    out_part: PauliOp,
    in_part: PauliOp,
}

fn place(n: usize, out_q: &[usize], out_part: &PauliOp, in_q: &[usize], in_part: &PauliOp) -> PauliOp {
    let mut p = PauliOp::identity(n);
    for (j, &q) in out_q.iter().enumerate() {
        p.set_letter(q, out_part.letter(j));
    }
    for (j, &q) in in_q.iter().enumerate() {
        p.set_letter(q, in_part.letter(j));
    }
    p.set_phase(out_part.phase() + in_part.phase());
    p
}

/// Compile a canonical circuit into its gauge group with the forward form.
pub fn build_code(c: &SpacetimeCircuit) -> Result<SubsystemCode> {
    build_code_with(c, Orientation::Forward)
}

pub fn build_code_with(c: &SpacetimeCircuit, orientation: Orientation) -> Result<SubsystemCode> {
    if !c.is_canonical() {
        return Err(Error::NotCanonical(
            "apply pad_and_canonicalize first (odd depth or odd idle run)".into(),
        ));
    }
    let index = SpacetimeQubitIndex::new(c);
    let n = index.num_qubits();
    let ports: Vec<(Vec<usize>, Vec<usize>)> = c
        .gates()
        .iter()
        .map(|g| {
            let ins = g.wires.iter().map(|&w| index.qubit(w, g.step).expect("in range")).collect();
            let outs = g.wires.iter().map(|&w| index.qubit(w, g.step + 1).expect("in range")).collect();
            (ins, outs)
        })
        .collect();

    // forward and backward forms of every gate generator
    let mut fwd = Vec::new();
    let mut bwd = Vec::new();
    for (gi, g) in c.gates().iter().enumerate() {
        let k = g.wires.len();
        let local: Vec<usize> = (0..k).collect();
        let herm = |slot: usize, letter: Letter| {
            let mut q = PauliOp::single(k, slot, letter);
            q.set_phase(q.hermitian_phase());
            q
        };
        let spread = |q: PauliOp| {
            let mut img = q.clone();
            conjugate(&mut img, &g.kind, &local, false);
            let mut pre = q;
            conjugate(&mut pre, &g.kind, &local, true);
            img.weight() + pre.weight()
        };
        for slot in 0..k {
            // any two distinct letters span the slot; Balanced keeps the pair
            // whose images reach the fewest other wires
            let mut pair = [Letter::X, Letter::Z];
            if orientation == Orientation::Balanced {
                let cost = |p: [Letter; 2]| spread(herm(slot, p[0])) + spread(herm(slot, p[1]));
                for alt in [[Letter::X, Letter::Y], [Letter::Z, Letter::Y]] {
                    if cost(alt) < cost(pair) {
                        pair = alt;
                    }
                }
            }
            for letter in pair {
                let q = herm(slot, letter);
                let mut img = q.clone();
                conjugate(&mut img, &g.kind, &local, false);
                let mut pre = q.clone();
                conjugate(&mut pre, &g.kind, &local, true);
                fwd.push(Candidate { gate: gi, slot, letter, out_part: img, in_part: q.clone() });
                bwd.push(Candidate { gate: gi, slot, letter, out_part: q, in_part: pre });
            }
        }
    }
    let supp = |cand: &Candidate| -> Vec<usize> {
        let (ins, outs) = &ports[cand.gate];
        let mut s: Vec<usize> = cand.out_part.support().iter().map(|&j| outs[j]).collect();
        s.extend(cand.in_part.support().iter().map(|&j| ins[j]));
        s.sort_unstable();
        s
    };

    let mut use_bwd = vec![false; fwd.len()];
    if orientation == Orientation::Balanced {
        let mut inc = vec![0usize; n];
        for w in c.init_wires() {
            inc[index.first_qubit(w)] += 1;
        }
        for w in c.post_wires() {
            inc[index.last_qubit(w)] += 1;
        }
        let mut optional = Vec::new();
        for i in 0..fwd.len() {
            let (sf, sb) = (supp(&fwd[i]), supp(&bwd[i]));
            if sf == sb {
                for q in sf {
                    inc[q] += 1;
                }
            } else {
                optional.push((i, sf, sb));
            }
        }
        for (i, sf, sb) in optional {
            let score = |mine: &[usize], other: &[usize]| {
                mine.iter().filter(|q| !other.contains(q)).map(|&q| inc[q] + 1).max().unwrap_or(0)
            };
            let choose_bwd = score(&sb, &sf) < score(&sf, &sb);
            use_bwd[i] = choose_bwd;
            for q in if choose_bwd { sb } else { sf } {
                inc[q] += 1;
            }
        }
        // keep the pre-images of each gate independent
        let mut start = 0;
        while start < fwd.len() {
            let gi = fwd[start].gate;
            let end = start + 2 * c.gates()[gi].wires.len();
            loop {
                let rows = (start..end)
                    .map(|i| if use_bwd[i] { bwd[i].in_part.to_symplectic() } else { fwd[i].in_part.to_symplectic() })
                    .collect();
                let m = BinaryMatrix::from_rows(rows, 2 * c.gates()[gi].wires.len())?;
                if m.rank() == end - start {
                    break;
                }
                let i = (start..end).find(|&i| use_bwd[i]).expect("forward set is a basis");
                use_bwd[i] = false;
            }
            start = end;
        }
    }

    let mut gens = Vec::new();
    let mut provenance = Vec::new();
    let mut gate_gens = vec![Vec::new(); c.gates().len()];
    for i in 0..fwd.len() {
        let cand = if use_bwd[i] { &bwd[i] } else { &fwd[i] };
        let (ins, outs) = &ports[cand.gate];
        gate_gens[cand.gate].push((gens.len(), cand.in_part.clone()));
        gens.push(place(n, outs, &cand.out_part, ins, &cand.in_part));
        provenance.push(Provenance::Gate {
            gate: cand.gate,
            slot: cand.slot,
            letter: cand.letter,
            step: c.gates()[cand.gate].step,
            backward: use_bwd[i],
        });
    }
    for w in c.init_wires() {
        gens.push(PauliOp::single(n, index.first_qubit(w), Letter::Z));
        provenance.push(Provenance::Init { wire: w });
    }
    for w in c.post_wires() {
        gens.push(PauliOp::single(n, index.last_qubit(w), Letter::Z));
        provenance.push(Provenance::Post { wire: w });
    }
    Ok(SubsystemCode {
        circuit: c.clone(),
        index,
        gauge: PauliGroup::new(n, gens)?,
        provenance,
        gate_gens,
    })
}
