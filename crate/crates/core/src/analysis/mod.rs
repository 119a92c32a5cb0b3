//! Code structure, distance and the structural checks on compiled codes.

mod code;
mod ft;
mod iso;

pub use crate::circuit::{decompose_measurement_group, MeasurementDecomposition};
pub use code::{analyze, sparsity, CodeAnalysis, CodeReport, Distance};
pub use ft::{format_pattern, verify_fault_tolerance, FtMode, FtReport, PatternVerdict, Verdict, FT_PATTERN_LIMIT};
pub use iso::{verify_isomorphism, IsomorphismReport, Lift};
