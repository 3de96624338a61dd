//! Half-tight cylinder generating function `H(L_1, L_2; μ]`, a function of `R` and `b_1 - b_2`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numeric::bessel::entire;
use crate::ring::rational::factorial;
use crate::ring::{MPoly, Symbol, TruncSeries};

pub const ROOT_VAR: &str = "R";

/// `Σ_{ℓ < order} 2^{-ℓ} (b_1 - b_2)^ℓ R^{ℓ+1} / (ℓ!(ℓ+1)!)`, truncated at `R^order`.
pub fn h_series(order: usize) -> TruncSeries<MPoly> {
    let diff = &MPoly::var(Symbol::B(1)) - &MPoly::var(Symbol::B(2));
    let mut coeffs = vec![MPoly::zero()];
    for l in 0..order as u32 {
        let den = BigInt::from(2).pow(l) * factorial(l) * factorial(l + 1);
        coeffs.push(diff.pow(l).scale(&BigRational::new(BigInt::from(1), den)));
    }
    TruncSeries::new(ROOT_VAR, coeffs, order)
}

/// `√(2R/(L_1²-L_2²)) I_1(√(L_1²-L_2²) √(2R))`, written as `R F_1(R (L_1²-L_2²)/2)` so that
/// `L_1 = L_2` and `R < 0` need no special casing.
pub fn h_numeric(l1: f64, l2: f64, r: f64) -> Result<f64> {
    if !(l1 >= l2 && l2 >= 0.0) {
        return Err(Error::Domain(format!("half-tight cylinder needs L1 >= L2 >= 0, got L1={l1}, L2={l2}")));
    }
    let d = (l1 - l2) * (l1 + l2);
    Ok(r * entire(1, r * d / 2.0))
}
