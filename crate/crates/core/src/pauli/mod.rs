//! Real Pauli group algebra and GF(2) symplectic linear algebra.

mod bitvec;
mod group;
mod matrix;
mod op;

pub use bitvec::BitVec;
pub use group::{CodeStructure, Decomposition, PauliGroup};
pub use matrix::{BinaryMatrix, Rref};
pub use op::{symplectic_dot, symplectic_swap, Letter, PauliOp};


/// `rref_rank`: rank, pivot columns, reduced rows and transform record.
pub fn rref_rank(m: &BinaryMatrix) -> Rref {
    m.rref(true)
}

pub fn multiply(a: &PauliOp, b: &PauliOp) -> crate::Result<PauliOp> {
    PauliOp::multiply(a, b)
}

pub fn commutes(a: &PauliOp, b: &PauliOp) -> crate::Result<bool> {
    a.try_commutes(b)
}

pub fn weight(p: &PauliOp) -> usize {
    p.weight()
}
