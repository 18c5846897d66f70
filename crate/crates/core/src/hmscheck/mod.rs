//! Assembly of both sides per cone and per edge, and the reports built from them.

pub mod affine;
pub mod export;
pub mod global;
pub mod report;

pub use affine::{affine_report, b_side_generator, check_affine};
pub use global::{build_descent, check_global, crepant_compare, crepant_report, global_report, DescentDiagram};
pub use report::{CheckResult, HmsReport, Status, Topology, SCHEMA_VERSION};
