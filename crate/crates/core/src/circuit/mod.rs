//! Spacetime Clifford circuits: IR, parser, canonical padding, a Pauli
//! propagation simulator with postselection and a dense oracle.

mod dense;
mod ed;
mod gate;
mod ir;
mod parse;
mod sim;

pub use dense::{dense_operator, dense_operator_with_errors, DenseOperator, DENSE_WIRE_LIMIT};
pub use ed::{
    decompose_measurement_group, evaluate_error_pattern, time_zero_equivalent, verify_good_ed, GoodEdReport,
    MeasurementAlgebra, MeasurementDecomposition, SymbolicEval,
};
pub use gate::{conjugate, gate_tableau, GateKind, Tableau};
pub use ir::{ErrorPattern, GadgetInfo, Gate, SpacetimeCircuit, Wire};
pub use parse::parse_circuit;
pub use sim::{post_pullbacks, simulate_accept_prob, AcceptProb};

