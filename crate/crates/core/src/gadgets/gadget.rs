use serde::{Deserialize, Serialize};

use super::graph::Graph;
use crate::circuit::{GadgetInfo, GateKind, SpacetimeCircuit};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOp};

/// Postselection gadget for a single Pauli.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub target: PauliOp,
    pub graph: Graph,
    pub info: GadgetInfo,
    /// Step of each vertex's fan-out.
    pub vertex_steps: Vec<u32>,
    /// Canonical circuit on data, vertex and edge blocks (in that wire order).
    pub circuit: SpacetimeCircuit,
}

/// Letters and sign of a Hermitian target, split into support and letters.
pub(crate) fn target_parts(p: &PauliOp) -> Result<(Vec<usize>, Vec<Letter>, bool)> {
    if !p.is_hermitian() {
        return Err(Error::InvalidArgument(format!("target {p} is not Hermitian")));
    }
    let negative = (p.phase() + 4 - p.hermitian_phase()) % 4 == 2;
    let support = p.support();
    let letters = support.iter().map(|&q| p.letter(q)).collect();
    Ok((support, letters, negative))
}

/// Assign fan-out steps: a local-search max cut fixes each vertex's step
/// parity, then each side is greedily colored into independent sets. Even
/// classes fire first at steps 0, 2, .., odd classes after them, so every
/// edge across the cut sees an even step then an odd one and needs no
/// padding.
pub(crate) fn schedule(g: &Graph) -> Vec<u32> {
    let n = g.num_vertices();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut side = vec![false; n];
    for v in 0..n {
        side[v] = v % 2 == 1;
    }
    loop {
        let mut improved = false;
        for v in 0..n {
            let same = adj[v].iter().filter(|&&u| side[u] == side[v]).count();
            if 2 * same > adj[v].len() {
                side[v] = !side[v];
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let mut color = vec![usize::MAX; n];
    for v in 0..n {
        let used: Vec<usize> = adj[v].iter().filter(|&&u| side[u] == side[v]).map(|&u| color[u]).collect();
        color[v] = (0..).find(|c| !used.contains(c)).expect("free color");
    }
    let even_classes = (0..n).filter(|&v| !side[v]).map(|v| color[v] + 1).max().unwrap_or(0);
    (0..n)
        .map(|v| if side[v] { 2 * (even_classes + color[v]) + 1 } else { 2 * color[v] } as u32)
        .collect()
}

/// Append a gadget for `letters` on `data` (negated when `negative`) with
/// fan-outs starting at `base` (even). Returns the layout, the vertex steps
/// and the first free even step after the gadget.
pub(crate) fn append_gadget(
    c: &mut SpacetimeCircuit,
    data: &[usize],
    letters: &[Letter],
    negative: bool,
    target: PauliOp,
    g: &Graph,
    base: u32,
) -> Result<(GadgetInfo, Vec<u32>, u32)> {
    let w = data.len();
    if g.num_vertices() < w {
        return Err(Error::InvalidGraph(format!("graph has {} vertices, target weight {w}", g.num_vertices())));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("gadget graph is disconnected".into()));
    }
    let steps: Vec<u32> = schedule(g).into_iter().map(|s| s + base).collect();
    let vertex_wires: Vec<usize> = (0..g.num_vertices()).map(|_| c.add_wire()).collect();
    let edge_wires: Vec<usize> = (0..g.edges().len()).map(|_| c.add_wire()).collect();
    for &w in vertex_wires.iter().chain(&edge_wires) {
        c.init(w)?;
    }
    let incidence = g.incidence();
    let mut end = base;
    for v in 0..g.num_vertices() {
        let mut wires = vec![vertex_wires[v]];
        let mut gate_letters = Vec::new();
        if v < w {
            wires.push(data[v]);
            gate_letters.push(letters[v]);
        }
        for &e in &incidence[v] {
            wires.push(edge_wires[e]);
            gate_letters.push(Letter::X);
        }
        c.push_at(GateKind::Fanout { letters: gate_letters, hadamard: true }, &wires, steps[v])?;
        end = end.max(steps[v] + 1);
    }
    if negative {
        // X outside the H pair flips the sign of the control-1 branch;
        // placed where the vertex wire would otherwise need padding
        let s = steps[0];
        let at = if s % 2 == 0 { s + 1 } else { s - 1 };
        c.push_at(GateKind::X, &[vertex_wires[0]], at)?;
        end = end.max(at + 1);
    }
    end += end % 2;
    let info = GadgetInfo { target, data_wires: data.to_vec(), vertex_wires, edge_wires, edges: g.edges().to_vec() };
    Ok((info, steps, end))
}

/// Gadget postselecting the +1 eigenspace of `p` (any sign) using graph `g`.
/// The data block is the support of `p`, in qubit order.
pub fn synth_gadget(p: &PauliOp, g: &Graph) -> Result<GadgetSpec> {
    let (support, letters, negative) = target_parts(p)?;
    if support.is_empty() {
        return Err(Error::InvalidArgument("gadget target is the identity".into()));
    }
    let w = support.len();
    let mut c = SpacetimeCircuit::new(w);
    let data: Vec<usize> = (0..w).collect();
    let target = p.restrict(&support);
    let (info, vertex_steps, _) = append_gadget(&mut c, &data, &letters, negative, target.clone(), g, 0)?;
    for &v in info.vertex_wires.iter().chain(&info.edge_wires) {
        c.post(v)?;
    }
    c.add_gadget_info(info.clone());
    let circuit = c.pad_and_canonicalize();
    Ok(GadgetSpec { target, graph: g.clone(), info, vertex_steps, circuit })
}

/// Qubit count of a gadget: constructed versus predicted versus the
/// `3 w' (d/2 + 2)` bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetAccounting {
    pub data: usize,
    pub vertex: usize,
    pub edge: usize,
    pub total: usize,
    /// Count predicted from the schedule: 3 per data and vertex wire,
    /// 3 per edge whose endpoints fire at opposite parity, else 5.
    pub predicted: usize,
    pub degree_bound: usize,
    pub same_parity_edges: usize,
}

pub fn gadget_accounting(spec: &GadgetSpec) -> GadgetAccounting {
    let c = &spec.circuit;
    let count = |ws: &[usize]| ws.iter().map(|&w| c.segment_count(w)).sum::<usize>();
    let data = count(&spec.info.data_wires);
    let vertex = count(&spec.info.vertex_wires);
    let edge = count(&spec.info.edge_wires);
    let same = spec
        .graph
        .edges()
        .iter()
        .filter(|&&(a, b)| spec.vertex_steps[a] % 2 == spec.vertex_steps[b] % 2)
        .count();
    let w = spec.info.data_wires.len();
    let v = spec.graph.num_vertices();
    let e = spec.graph.edges().len();
    let d = spec.graph.max_degree();
    GadgetAccounting {
        data,
        vertex,
        edge,
        total: data + vertex + edge,
        predicted: 3 * w + 3 * v + 3 * e + 2 * same,
        degree_bound: 3 * v * (d + 4) / 2,
        same_parity_edges: same,
    }
}
