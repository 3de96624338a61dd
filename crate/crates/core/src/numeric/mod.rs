//! Floating-point special functions and quadrature.

pub mod bessel;
pub mod quad;
