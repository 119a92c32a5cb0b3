//! Circuit-to-code compilation for sparse subsystem codes.
//!
//! A Clifford error-detecting circuit with `|0>` initializations and `<0|`
//! postselections is turned into a subsystem code with one physical qubit per
//! wire segment. The toolkit also synthesizes expander-graph postselection
//! gadgets, verifies the inherited code parameters, and builds concatenated
//! and spatially local families.

pub mod analysis;
pub mod circuit;
pub mod codemap;
pub mod error;
pub mod gadgets;
pub mod pauli;
pub mod scaling;

pub use error::{Error, Result};
