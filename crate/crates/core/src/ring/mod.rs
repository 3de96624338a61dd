//! Exact coefficient rings: rationals, sparse polynomials, truncated series.

pub mod mpoly;
pub mod rational;
pub mod series;
pub mod symbol;

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub use mpoly::{MPoly, Monomial};
pub use series::{LaurentSeries, TruncSeries};
pub use symbol::Symbol;

/// Commutative ring with unit and a map from ℚ.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn try_inverse(&self) -> Option<Self>;

    fn scale(&self, r: &BigRational) -> Self {
        self.mul_ref(&Self::from_rational(r))
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(r: &BigRational) -> Self {
        rational::to_f64(r)
    }
    fn try_inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}

/// Double-double floats, for numeric identities whose terms dwarf their sum.
impl Ring for twofloat::TwoFloat {
    fn zero() -> Self {
        twofloat::TwoFloat::from_f64(0.0)
    }
    fn one() -> Self {
        twofloat::TwoFloat::from_f64(1.0)
    }
    fn is_zero(&self) -> bool {
        self.hi() == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg_ref(&self) -> Self {
        -*self
    }
    fn from_rational(r: &BigRational) -> Self {
        let hi = rational::to_f64(r);
        let lo = match rational::from_f64(hi) {
            Some(h) => rational::to_f64(&(r - h)),
            None => 0.0,
        };
        twofloat::TwoFloat::from_f64(hi) + twofloat::TwoFloat::from_f64(lo)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.hi() == 0.0 {
            return None;
        }
        // the crate's division is only double accurate; one Newton step restores it
        let one = twofloat::TwoFloat::from_f64(1.0);
        let y = twofloat::TwoFloat::from_f64(1.0 / self.hi());
        Some(y + y * (one - *self * y))
    }
}
