//! Expander-graph postselection gadgets and the sparsification pipeline.

mod compose;
mod gadget;
pub(crate) use gadget::target_parts;
mod graph;

pub use compose::{compose_ed_circuit, sparsify, EdCircuit, GadgetRecord, SparsifyReport};
pub use gadget::{gadget_accounting, synth_gadget, GadgetAccounting, GadgetSpec};
pub use graph::{edge_expansion, make_graph, CertifiedGraph, Graph, GraphPolicy, EXPANSION_LIMIT, RANDOM_GRAPH_BUDGET};
