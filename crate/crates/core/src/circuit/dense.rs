use num_complex::Complex64;

use super::gate::{apply_gate, apply_pauli};
use super::ir::{ErrorPattern, SpacetimeCircuit};
use crate::error::{Error, Result};
use crate::pauli::PauliOp;

/// Largest circuit handled by the dense oracle.
pub const DENSE_WIRE_LIMIT: usize = 12;

/// Row-major complex matrix from data-input basis states (columns) to
/// output basis states (rows). Bit j of an index is the j-th data wire.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseOperator { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Dense matrix of a Pauli operator.
    pub fn from_pauli(p: &PauliOp) -> Self {
        let n = p.num_qubits();
        let dim = 1usize << n;
        let mut m = Self::zeros(dim, dim);
        for col in 0..dim {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[col] = Complex64::new(1.0, 0.0);
            apply_pauli(&mut v, p);
            for (row, a) in v.into_iter().enumerate() {
                m.data[row * dim + col] = a;
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseOperator {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseOperator {
        DenseOperator { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_norm() < tol
    }

    /// λ with `self = λ * other`, if one exists within `tol`.
    pub fn proportionality(&self, other: &DenseOperator, tol: f64) -> Option<Complex64> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if other.data[idx].norm() < tol {
            return self.is_zero(tol).then_some(Complex64::new(0.0, 0.0));
        }
        let lambda = self.data[idx] / other.data[idx];
        (self.max_abs_diff(&other.scale(lambda)) < tol).then_some(lambda)
    }
}

/// `V = (prod <0|) U (prod |0>)`.
pub fn dense_operator(c: &SpacetimeCircuit) -> Result<DenseOperator> {
    dense_operator_with_errors(c, &ErrorPattern::new())
}

/// `V_E` with error slice E_t applied just before the gates of step t.
pub fn dense_operator_with_errors(c: &SpacetimeCircuit, e: &ErrorPattern) -> Result<DenseOperator> {
    let nw = c.num_wires();
    if nw > DENSE_WIRE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "dense oracle limited to {DENSE_WIRE_LIMIT} wires, circuit has {nw}"
        )));
    }
    e.validate(c)?;
    let inputs = c.data_wires();
    let outputs = c.output_wires();
    let posts = c.post_wires();
    let by_step = c.gates_by_step();
    let dim = 1usize << nw;
    let mut out = DenseOperator::zeros(1 << outputs.len(), 1 << inputs.len());
    let slices: Vec<(u32, PauliOp)> = (0..=c.depth())
        .map(|t| (t, e.slice(nw, t)))
        .filter(|(_, p)| !p.is_identity_mod_phase())
        .collect();
    for col in 0..(1usize << inputs.len()) {
        let mut idx = 0usize;
        for (j, &w) in inputs.iter().enumerate() {
            if col >> j & 1 == 1 {
                idx |= 1 << w;
            }
        }
        let mut state = vec![Complex64::new(0.0, 0.0); dim];
        state[idx] = Complex64::new(1.0, 0.0);
        for t in 0..=c.depth() {
            for (_, p) in slices.iter().filter(|(tt, _)| *tt == t) {
                apply_pauli(&mut state, p);
            }
            if (t as usize) < by_step.len() {
                for &g in &by_step[t as usize] {
                    let gate = &c.gates()[g];
                    apply_gate(&mut state, &gate.kind, &gate.wires);
                }
            }
        }
        let post_mask: usize = posts.iter().map(|&w| 1usize << w).sum();
        for (i, amp) in state.iter().enumerate() {
            if i & post_mask != 0 || amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut row = 0usize;
            for (j, &w) in outputs.iter().enumerate() {
                if i >> w & 1 == 1 {
                    row |= 1 << j;
                }
            }
            out.data[row * out.cols + col] = *amp;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn empty_wire_is_identity() {
        let mut c = SpacetimeCircuit::new(1);
        c.push(crate::circuit::GateKind::I, &[0]).unwrap();
        let v = dense_operator(&c).unwrap();
        assert!(v.max_abs_diff(&DenseOperator::identity(2)) < 1e-15);
    }

    #[test]
    fn init_h_post_amplitude() {
        let v = dense_operator(&parse_circuit("INIT 0\nH 0\nPOST 0").unwrap()).unwrap();
        assert_eq!((v.rows, v.cols), (1, 1));
        assert!((v.get(0, 0).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn too_many_wires() {
        let c = SpacetimeCircuit::new(13);
        assert!(matches!(dense_operator(&c), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn pauli_matrix_of_iy() {
        let m = DenseOperator::from_pauli(&"Y".parse().unwrap());
        // iY = [[0, 1], [-1, 0]]
        assert_eq!(m.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(1, 0), Complex64::new(-1.0, 0.0));
    }
}
