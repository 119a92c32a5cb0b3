//! Circuit-to-code compiler with the spackle and squeegee maps.

mod build;
mod index;
mod io;
mod spackle;

pub use build::{build_code, build_code_with, Orientation, Provenance, SubsystemCode};
pub use index::SpacetimeQubitIndex;
pub use io::{parse_stabilizer_file, stabilizer_text, CodeFile};
pub use spackle::{
    column_generators, eta, gauge_equivalent, operator_pattern, pattern_operator, spack, squeegee, squeegee_operator, ColumnGenerator,
    Squeegee, COLUMN_WIRE_LIMIT,
};

pub(crate) use spackle::{spack_indexed, time_zero_pullbacks};
