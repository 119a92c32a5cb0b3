use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::gadget::{append_gadget, target_parts};
use super::graph::{make_graph, GraphPolicy};
use crate::analysis::{analyze, verify_isomorphism, CodeReport, IsomorphismReport};
use crate::circuit::{verify_good_ed, GoodEdReport, SpacetimeCircuit};
use crate::codemap::{build_code_with, Orientation, SubsystemCode};
use crate::error::{Error, Result};
use crate::pauli::{PauliGroup, PauliOp};

/// Per-gadget record of a composed circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRecord {
    pub target: PauliOp,
    pub seed: u64,
    pub edges: Vec<(usize, usize)>,
    pub num_vertices: usize,
    pub expansion: Ratio<u64>,
    pub attempts: usize,
    pub max_arity: usize,
    /// Qubits on this gadget's vertex and edge wires.
    pub ancilla_qubits: usize,
    /// `3 w' (deg/2 + 2)` with w' vertices.
    pub degree_bound: usize,
}

/// An error-detecting circuit built from one gadget per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdCircuit {
    pub circuit: SpacetimeCircuit,
    pub gadgets: Vec<GadgetRecord>,
    pub data_qubits: usize,
}

impl EdCircuit {
    pub fn total_qubits(&self) -> usize {
        self.data_qubits + self.gadgets.iter().map(|g| g.ancilla_qubits).sum::<usize>()
    }

    /// Sum of per-gadget bounds. Data qubits are shared between gadgets,
    /// so the base qubits are added once.
    pub fn qubit_bound(&self, n0: usize) -> usize {
        n0 + self.gadgets.iter().map(|g| g.degree_bound).sum::<usize>()
    }
}

/// Sequentially compose postselection gadgets for the generators of `base`
/// on shared data wires. Gadget i draws its graph with seed `seed + i`.
pub fn compose_ed_circuit(base: &PauliGroup, policy: GraphPolicy, seed: u64) -> Result<EdCircuit> {
    let n0 = base.num_qubits();
    if base.rank() != base.len() {
        return Err(Error::InvalidCode("base generators are not independent".into()));
    }
    let mut c = SpacetimeCircuit::new(n0);
    let mut records = Vec::new();
    let mut step = 0u32;
    for (i, p) in base.generators().iter().enumerate() {
        let (support, letters, negative) = target_parts(p)?;
        if support.len() < 2 {
            return Err(Error::InvalidCode(format!(
                "generator {i} ({p}) has weight {}; weight-1 generators are not supported",
                support.len()
            )));
        }
        let gseed = seed.wrapping_add(i as u64);
        let cert = make_graph(support.len(), policy, gseed)?;
        let (info, _, end) = append_gadget(&mut c, &support, &letters, negative, p.clone(), &cert.graph, step)?;
        step = end;
        records.push((info, cert, gseed));
    }
    let ancillas = c.init_wires();
    for w in ancillas {
        c.post(w)?;
    }
    for (info, _, _) in &records {
        c.add_gadget_info(info.clone());
    }
    let circuit = c.pad_and_canonicalize();
    let seg = |ws: &[usize]| ws.iter().map(|&w| circuit.segment_count(w)).sum::<usize>();
    let gadgets = records
        .into_iter()
        .map(|(info, cert, gseed)| {
            let d = cert.graph.max_degree();
            let v = cert.graph.num_vertices();
            GadgetRecord {
                target: info.target.clone(),
                seed: gseed,
                edges: cert.graph.edges().to_vec(),
                num_vertices: v,
                expansion: cert.expansion,
                attempts: cert.attempts,
                max_arity: d + 2,
                ancilla_qubits: seg(&info.vertex_wires) + seg(&info.edge_wires),
                degree_bound: 3 * v * (d + 4) / 2,
            }
        })
        .collect();
    let data_qubits = seg(&(0..n0).collect::<Vec<_>>());
    Ok(EdCircuit { circuit, gadgets, data_qubits })
}

/// Outcome of the full sparsification pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsifyReport {
    pub policy: GraphPolicy,
    pub seed: u64,
    pub n0: usize,
    pub k0: usize,
    pub d0: Option<usize>,
    pub code: CodeReport,
    pub good_ed: GoodEdReport,
    pub isomorphism: IsomorphismReport,
    pub gadgets: Vec<GadgetRecord>,
    pub total_qubits: usize,
    pub qubit_bound: usize,
    pub within_bound: bool,
    pub k_preserved: bool,
    /// Equal distances, or `None` when either search was inconclusive.
    pub d_preserved: Option<bool>,
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Verification { .. } => e,
        e => Error::Verification { stage: name.into(), msg: e.to_string() },
    })
}

/// Compose, compile and analyze a sparse subsystem code for `base`.
/// Distances are searched up to `max_w` on both codes.
pub fn sparsify(
    base: &PauliGroup,
    policy: GraphPolicy,
    seed: u64,
    max_w: Option<usize>,
    threads: Option<usize>,
) -> Result<(SubsystemCode, SparsifyReport)> {
    let base_report = stage("base", analyze(base, max_w, threads))?;
    let ed = stage("compose", compose_ed_circuit(base, policy, seed))?;
    let good_ed = stage("good_ed", verify_good_ed(&ed.circuit, base))?;
    if !good_ed.good {
        return Err(Error::Verification { stage: "good_ed".into(), msg: good_ed.failures.join("; ") });
    }
    let code = stage("build_code", build_code_with(&ed.circuit, Orientation::Balanced))?;
    let report = stage("analyze", analyze(code.gauge(), max_w, threads))?;
    let isomorphism = stage("isomorphism", verify_isomorphism(&code, base))?;
    let total_qubits = ed.total_qubits();
    if total_qubits != code.num_qubits() {
        return Err(Error::Verification {
            stage: "accounting".into(),
            msg: format!("counted {total_qubits} qubits, code has {}", code.num_qubits()),
        });
    }
    let qubit_bound = ed.qubit_bound(base.num_qubits());
    let d_preserved = match (base_report.d_is_exact, report.d_is_exact) {
        (true, true) => Some(base_report.d == report.d),
        _ => None,
    };
    let out = SparsifyReport {
        policy,
        seed,
        n0: base.num_qubits(),
        k0: base_report.k,
        d0: base_report.d_is_exact.then_some(base_report.d).flatten(),
        k_preserved: report.k == base_report.k,
        d_preserved,
        code: report,
        good_ed,
        isomorphism,
        gadgets: ed.gadgets,
        total_qubits,
        qubit_bound,
        within_bound: total_qubits <= qubit_bound,
    };
    Ok((code, out))
}
