use serde::{Deserialize, Serialize};

use crate::circuit::SpacetimeCircuit;

/// Map between spacetime coordinates and physical qubits.
///
/// Every wire spans [0, T]; a wire with gates at steps s_1 < ... < s_m is
/// cut into m+1 segments starting at 0, s_1+1, ..., s_m+1. One physical
/// qubit sits on each segment, at its start time. Other times inside a
/// segment are idle (dummy) steps and share that qubit. Qubits are numbered
/// time-major: by start time, then wire.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacetimeQubitIndex {
    depth: u32,
    /// Per wire, sorted segment start times.
    starts: Vec<Vec<u32>>,
    /// Per wire, qubit id of each segment.
    ids: Vec<Vec<usize>>,
    coords: Vec<(usize, u32)>,
}

impl SpacetimeQubitIndex {
    pub fn new(c: &SpacetimeCircuit) -> Self {
        let mut starts: Vec<Vec<u32>> = vec![vec![0]; c.num_wires()];
        for g in c.gates() {
            for &w in &g.wires {
                starts[w].push(g.step + 1);
            }
        }
        for s in &mut starts {
            s.sort_unstable();
        }
        let mut coords: Vec<(usize, u32)> =
            starts.iter().enumerate().flat_map(|(w, s)| s.iter().map(move |&t| (w, t))).collect();
        coords.sort_by_key(|&(w, t)| (t, w));
        let mut ids: Vec<Vec<usize>> = starts.iter().map(|s| vec![0; s.len()]).collect();
        for (q, &(w, t)) in coords.iter().enumerate() {
            let j = starts[w].binary_search(&t).expect("start present");
            ids[w][j] = q;
        }
        SpacetimeQubitIndex { depth: c.depth(), starts, ids, coords }
    }

    pub fn num_qubits(&self) -> usize {
        self.coords.len()
    }

    pub fn num_wires(&self) -> usize {
        self.starts.len()
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Qubit holding coordinate (w, t).
    pub fn qubit(&self, w: usize, t: u32) -> Option<usize> {
        if w >= self.starts.len() || t > self.depth {
            return None;
        }
        let j = self.starts[w].partition_point(|&s| s <= t) - 1;
        Some(self.ids[w][j])
    }

    /// (wire, start time) of a qubit.
    pub fn coordinate(&self, q: usize) -> (usize, u32) {
        self.coords[q]
    }

    /// Whether (w, t) is the start of a segment rather than an idle step.
    pub fn is_live(&self, w: usize, t: u32) -> bool {
        w < self.starts.len() && self.starts[w].binary_search(&t).is_ok()
    }

    pub fn first_qubit(&self, w: usize) -> usize {
        self.ids[w][0]
    }

    pub fn last_qubit(&self, w: usize) -> usize {
        *self.ids[w].last().expect("nonempty")
    }

    pub fn wire_qubits(&self, w: usize) -> &[usize] {
        &self.ids[w]
    }

    pub fn coordinates(&self) -> &[(usize, u32)] {
        &self.coords
    }
}
