//! Moment geometry of a defect weight: the root `R`, moments, reverse moments,
//! half-tight cylinders, tight decomposition and free energies.

pub mod decomposition;
pub mod energy;
pub mod formal;
pub mod halftight;
pub mod moments;
pub mod weight;
