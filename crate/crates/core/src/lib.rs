//! Combinatorial checks of homological mirror symmetry for toric Calabi-Yau
//! 3-orbifolds and their mirror punctured curves.
pub mod curvetop;
pub mod error;
pub mod fukaya;
pub mod hmscheck;
pub mod mfside;
pub mod ribbon;
pub mod series;
pub mod snf;
pub mod toricdata;

pub use error::{InputError, StructureError};
