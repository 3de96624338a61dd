//! Exact computation of tight Weil–Petersson volumes: kernel, residue and
//! moment recursions, defect-gas moment geometry, and JT correlators.

pub mod error;
pub mod geometry;
pub mod jt;
pub mod kernel;
pub mod memo;
pub mod nrec;
pub mod regular;
pub mod numeric;
pub mod residue;
pub mod ring;
pub mod volume;

pub use error::{Error, Result};
