use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::gate::{conjugate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOp};

/// A wire with its live interval in integer time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wire {
    pub t_in: u32,
    pub t_out: u32,
    pub initialized: bool,
    pub postselected: bool,
}

/// A gate acting between integer times `step` and `step + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub wires: Vec<usize>,
    pub step: u32,
    /// Identity inserted by canonicalization.
    pub padding: bool,
}

impl Gate {
    /// Half-integer time of the gate.
    pub fn time(&self) -> f64 {
        self.step as f64 + 0.5
    }
}

/// Layout of a postselection gadget inside a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInfo {
    pub target: PauliOp,
    pub data_wires: Vec<usize>,
    pub vertex_wires: Vec<usize>,
    pub edge_wires: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Clifford circuit on wires with integer qubit times and half-integer
/// gate times, `|0>` initializations and `<0|` postselections.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpacetimeCircuit {
    wires: Vec<Wire>,
    gates: Vec<Gate>,
    depth: u32,
    gadgets: Vec<GadgetInfo>,
}

impl SpacetimeCircuit {
    pub fn new(num_wires: usize) -> Self {
        let wire = Wire { t_in: 0, t_out: 0, initialized: false, postselected: false };
        SpacetimeCircuit { wires: vec![wire; num_wires], gates: Vec::new(), depth: 0, gadgets: Vec::new() }
    }

    pub fn num_wires(&self) -> usize {
        self.wires.len()
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn wire(&self, w: usize) -> &Wire {
        &self.wires[w]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Final integer time T.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn gadgets(&self) -> &[GadgetInfo] {
        &self.gadgets
    }

    pub fn add_gadget_info(&mut self, info: GadgetInfo) {
        self.gadgets.push(info);
    }

    pub fn add_wire(&mut self) -> usize {
        self.wires.push(Wire { t_in: 0, t_out: 0, initialized: false, postselected: false });
        self.wires.len() - 1
    }

    fn check_wire(&self, w: usize) -> Result<()> {
        if w >= self.wires.len() {
            return Err(Error::InvalidCircuit(format!("wire {w} out of range")));
        }
        Ok(())
    }

    /// Mark a wire as initialized in `|0>`. Must precede its gates.
    pub fn init(&mut self, w: usize) -> Result<()> {
        self.check_wire(w)?;
        if self.wires[w].postselected {
            return Err(Error::InvalidCircuit(format!("wire {w}: postselect before init")));
        }
        if self.wires[w].initialized {
            return Err(Error::InvalidCircuit(format!("wire {w} initialized twice")));
        }
        if self.gates.iter().any(|g| g.wires.contains(&w)) {
            return Err(Error::InvalidCircuit(format!("wire {w}: init after gates")));
        }
        self.wires[w].initialized = true;
        Ok(())
    }

    /// Mark a wire as postselected onto `<0|`. No gates may follow.
    pub fn post(&mut self, w: usize) -> Result<()> {
        self.check_wire(w)?;
        if self.wires[w].postselected {
            return Err(Error::InvalidCircuit(format!("wire {w} postselected twice")));
        }
        self.wires[w].postselected = true;
        Ok(())
    }

    fn validate_gate(&self, kind: &GateKind, wires: &[usize]) -> Result<()> {
        if wires.len() != kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{} expects {} wires, got {}",
                kind.name(),
                kind.arity(),
                wires.len()
            )));
        }
        for (i, &w) in wires.iter().enumerate() {
            self.check_wire(w)?;
            if wires[..i].contains(&w) {
                return Err(Error::InvalidCircuit(format!("duplicate wire {w} in {}", kind.name())));
            }
            if self.wires[w].postselected {
                return Err(Error::InvalidCircuit(format!("gate on wire {w} after postselection")));
            }
        }
        Ok(())
    }

    fn next_free(&self, w: usize) -> u32 {
        self.gates.iter().filter(|g| g.wires.contains(&w)).map(|g| g.step + 1).max().unwrap_or(0)
    }

    /// Append a gate at the earliest step after all earlier gates on its wires.
    pub fn push(&mut self, kind: GateKind, wires: &[usize]) -> Result<usize> {
        self.validate_gate(&kind, wires)?;
        let step = wires.iter().map(|&w| self.next_free(w)).max().unwrap_or(0);
        Ok(self.insert(Gate { kind, wires: wires.to_vec(), step, padding: false }))
    }

    /// Place a gate at an explicit step.
    pub fn push_at(&mut self, kind: GateKind, wires: &[usize], step: u32) -> Result<usize> {
        self.validate_gate(&kind, wires)?;
        for &w in wires {
            if self.gates.iter().any(|g| g.step == step && g.wires.contains(&w)) {
                return Err(Error::InvalidCircuit(format!("wire {w} collides at time {}.5", step)));
            }
        }
        Ok(self.insert(Gate { kind, wires: wires.to_vec(), step, padding: false }))
    }

    fn insert(&mut self, gate: Gate) -> usize {
        let key = (gate.step, gate.wires[0]);
        let pos = self.gates.partition_point(|g| (g.step, g.wires[0]) <= key);
        for &w in &gate.wires {
            let wire = &mut self.wires[w];
            let first = !self.gates.iter().any(|g| g.wires.contains(&w));
            if first || gate.step < wire.t_in {
                wire.t_in = gate.step;
            }
            wire.t_out = wire.t_out.max(gate.step + 1);
        }
        self.depth = self.depth.max(gate.step + 1);
        self.gates.insert(pos, gate);
        pos
    }

    /// Gate indices per wire in time order.
    pub fn wire_gates(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.wires.len()];
        for (i, g) in self.gates.iter().enumerate() {
            for &w in &g.wires {
                out[w].push(i);
            }
        }
        out
    }

    /// Gate indices grouped by step.
    pub fn gates_by_step(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.depth as usize];
        for (i, g) in self.gates.iter().enumerate() {
            out[g.step as usize].push(i);
        }
        out
    }

    pub fn data_wires(&self) -> Vec<usize> {
        (0..self.wires.len()).filter(|&w| !self.wires[w].initialized).collect()
    }

    pub fn output_wires(&self) -> Vec<usize> {
        (0..self.wires.len()).filter(|&w| !self.wires[w].postselected).collect()
    }

    pub fn init_wires(&self) -> Vec<usize> {
        (0..self.wires.len()).filter(|&w| self.wires[w].initialized).collect()
    }

    pub fn post_wires(&self) -> Vec<usize> {
        (0..self.wires.len()).filter(|&w| self.wires[w].postselected).collect()
    }

    /// `U_{<=t-1/2} p U_{<=t-1/2}†`: push a wire-level Pauli from time 0 to time t.
    pub fn push_forward(&self, p: &PauliOp, t: u32) -> PauliOp {
        let mut q = p.clone();
        for g in self.gates.iter().filter(|g| g.step < t) {
            conjugate(&mut q, &g.kind, &g.wires, false);
        }
        q
    }

    /// `U_{<=t-1/2}† p U_{<=t-1/2}`: pull a wire-level Pauli at time t back to time 0.
    pub fn pull_back(&self, p: &PauliOp, t: u32) -> PauliOp {
        let mut q = p.clone();
        for g in self.gates.iter().rev().filter(|g| g.step < t) {
            conjugate(&mut q, &g.kind, &g.wires, true);
        }
        q
    }

    /// Conjugation by the whole circuit unitary.
    pub fn conjugate_full(&self, p: &PauliOp, inverse: bool) -> PauliOp {
        if inverse {
            self.pull_back(p, self.depth)
        } else {
            self.push_forward(p, self.depth)
        }
    }

    /// True when T is even and every idle run on every wire has even length,
    /// so each wire carries an even number of gates.
    pub fn is_canonical(&self) -> bool {
        self.depth % 2 == 0 && self.odd_runs().is_empty()
    }

    /// Steps at which an identity must be inserted to make idle runs even.
    fn odd_runs(&self) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        let t = self.depth + self.depth % 2;
        for (w, ids) in self.wire_gates().iter().enumerate() {
            let mut prev_end = 0u32;
            for &i in ids {
                let s = self.gates[i].step;
                if (s - prev_end) % 2 == 1 {
                    out.push((w, s - 1));
                }
                prev_end = s + 1;
            }
            if (t - prev_end) % 2 == 1 {
                out.push((w, t - 1));
            }
        }
        out
    }

    /// Pad with identities so that T is even and idle runs have even
    /// length; every wire then spans [0, T] with postselection at T.
    pub fn pad_and_canonicalize(&self) -> SpacetimeCircuit {
        let mut c = self.clone();
        let pads = c.odd_runs();
        c.depth += c.depth % 2;
        let t = c.depth;
        for (w, step) in pads {
            c.insert(Gate { kind: GateKind::I, wires: vec![w], step, padding: true });
        }
        c.depth = t;
        for wire in &mut c.wires {
            wire.t_in = 0;
            wire.t_out = t;
        }
        c
    }

    /// Number of physical qubits on wire `w` in the code (segments).
    pub fn segment_count(&self, w: usize) -> usize {
        self.gates.iter().filter(|g| g.wires.contains(&w)).count() + 1
    }

    /// Plain-text circuit format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} wires, depth {}", self.wires.len(), self.depth);
        for info in &self.gadgets {
            let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let edges: Vec<String> = info.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            let _ = writeln!(
                s,
                "# GADGET {} data={} vertices={} edge_wires={} graph={}",
                info.target,
                join(&info.data_wires),
                join(&info.vertex_wires),
                join(&info.edge_wires),
                edges.join(",")
            );
        }
        for w in self.init_wires() {
            let _ = writeln!(s, "INIT {w}");
        }
        for g in &self.gates {
            let ws: Vec<String> = g.wires.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(s, "{} {} @ {}.5", g.kind.name(), ws.join(" "), g.step);
        }
        for w in self.post_wires() {
            let _ = writeln!(s, "POST {w}");
        }
        s
    }
}

/// Assignment of single-qubit letters to spacetime coordinates (wire, time).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPattern {
    entries: BTreeMap<(usize, u32), Letter>,
}

impl ErrorPattern {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(wire: usize, time: u32, letter: Letter) -> Self {
        let mut e = Self::new();
        e.insert(wire, time, letter);
        e
    }

    pub fn insert(&mut self, wire: usize, time: u32, letter: Letter) {
        if letter == Letter::I {
            self.entries.remove(&(wire, time));
        } else {
            self.entries.insert((wire, time), letter);
        }
    }

    pub fn get(&self, wire: usize, time: u32) -> Letter {
        self.entries.get(&(wire, time)).copied().unwrap_or(Letter::I)
    }

    /// |E|: number of non-identity entries.
    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32, Letter)> + '_ {
        self.entries.iter().map(|(&(w, t), &l)| (w, t, l))
    }

    /// Wire-level Pauli of the entries at time t.
    pub fn slice(&self, num_wires: usize, t: u32) -> PauliOp {
        let mut p = PauliOp::identity(num_wires);
        for (w, tt, l) in self.iter() {
            if tt == t {
                p.set_letter(w, l);
            }
        }
        p
    }

    pub fn validate(&self, c: &SpacetimeCircuit) -> Result<()> {
        for (wire, time, _) in self.iter() {
            if wire >= c.num_wires() || time > c.depth() {
                return Err(Error::InvalidCoordinate { wire, time });
            }
        }
        Ok(())
    }
}
