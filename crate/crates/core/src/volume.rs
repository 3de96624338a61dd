//! Labelled volume polynomials and conversions between coefficient bases.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::rational::{double_factorial, factorial, rat};
use crate::ring::{MPoly, Symbol, TruncSeries};

/// Which symbols the coefficients are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Reverse moments `β_m`; the polynomial is the full tight volume.
    Beta,
    /// Normalized moments `m_k`; the polynomial is `M_0^{2g-2+n} T`.
    Moments,
    /// `π²` only: classical volumes.
    Wp,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(Basis::Beta),
            "moments" => Ok(Basis::Moments),
            "wp" => Ok(Basis::Wp),
            _ => Err(Error::Domain(format!("unknown basis `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumePoly {
    pub g: u32,
    pub n: u32,
    pub basis: Basis,
    pub poly: MPoly,
}

pub fn is_stable(g: u32, n: u32) -> bool {
    2 * g + n > 2
}

pub fn check_stable(g: u32, n: u32) -> Result<()> {
    if is_stable(g, n) {
        Ok(())
    } else {
        Err(Error::Unstable { g, n })
    }
}

/// Exponent of `M_0⁻¹` carried by a tight volume: `2g-2+n`.
pub fn prefactor_exponent(g: u32, n: u32) -> u32 {
    2 * g + n - 2
}

/// `β_m = M_0⁻¹ r_m(m)`; returns `r_0..=r_k` from the reciprocal of
/// `Σ_p m_p u^{2p} / (2p+1)!!` with `m_0 = 1`.
pub fn reverse_moment_polys(k: usize) -> Vec<MPoly> {
    static CACHE: OnceLock<std::sync::Mutex<Vec<MPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() <= k {
        let mut eta = vec![MPoly::one()];
        for p in 1..=k {
            let den = BigRational::from_integer(double_factorial(2 * p as i64 + 1));
            eta.push(MPoly::var(Symbol::SmallM(p as u16)).scale(&den.recip()));
        }
        let r = TruncSeries::new("u", eta, k).recip().expect("unit constant term");
        *guard = (0..=k).map(|i| r.coeff(i).expect("within order")).collect();
    }
    guard[..=k].to_vec()
}

/// `M_k[0] / M_0[0] = (-2π²)^k / k!`.
pub fn wp_moment(k: u32) -> MPoly {
    MPoly::var(Symbol::Q)
        .scale(&rat(-2, 1))
        .pow(k)
        .scale(&BigRational::from_integer(factorial(k)).recip())
}

/// `β_m[0]` as polynomials in `q = π²` (coefficients of `2πu / sin 2πu`).
pub fn wp_reverse_moments(k: usize) -> Vec<MPoly> {
    let assign: BTreeMap<Symbol, MPoly> =
        (1..=k as u16).map(|p| (Symbol::SmallM(p), wp_moment(p as u32))).collect();
    reverse_moment_polys(k).iter().map(|r| r.subst(&assign)).collect()
}

fn max_beta_index(p: &MPoly) -> usize {
    p.symbols()
        .into_iter()
        .filter_map(|s| if let Symbol::Beta(m) = s { Some(m as usize) } else { None })
        .max()
        .unwrap_or(0)
}

fn max_small_m_index(p: &MPoly) -> u16 {
    p.symbols()
        .into_iter()
        .filter_map(|s| if let Symbol::SmallM(m) = s { Some(m) } else { None })
        .max()
        .unwrap_or(0)
}

/// Removes `M_0^{-d}` from every term, failing if some term carries another power.
fn strip_inv_m0(p: &MPoly, d: u32) -> Result<MPoly> {
    let parts = p.split_by(Symbol::InvM0);
    match parts.len() {
        0 => Ok(MPoly::zero()),
        1 if parts.contains_key(&d) => Ok(parts[&d].clone()),
        _ => Err(Error::NotHomogeneous(format!(
            "expected every term to carry invM0^{d}, found powers {:?}",
            parts.keys().collect::<Vec<_>>()
        ))),
    }
}

impl VolumePoly {
    pub fn new(g: u32, n: u32, basis: Basis, poly: MPoly) -> Self {
        Self { g, n, basis, poly }
    }

    pub fn prefactor_exponent(&self) -> u32 {
        prefactor_exponent(self.g, self.n)
    }

    /// Conversion `beta → moments` or `beta|moments → wp`.
    pub fn to_basis(&self, target: Basis) -> Result<VolumePoly> {
        let poly = match (self.basis, target) {
            (a, b) if a == b => self.poly.clone(),
            (Basis::Beta, Basis::Moments) => {
                let r = reverse_moment_polys(max_beta_index(&self.poly));
                let inv = MPoly::var(Symbol::InvM0);
                let assign: BTreeMap<Symbol, MPoly> =
                    r.iter().enumerate().map(|(m, rm)| (Symbol::Beta(m as u16), &inv * rm)).collect();
                strip_inv_m0(&self.poly.subst(&assign), self.prefactor_exponent())?
            }
            (Basis::Beta, Basis::Wp) => {
                let r = wp_reverse_moments(max_beta_index(&self.poly));
                let assign: BTreeMap<Symbol, MPoly> =
                    r.into_iter().enumerate().map(|(m, rm)| (Symbol::Beta(m as u16), rm)).collect();
                self.poly.subst(&assign)
            }
            (Basis::Moments, Basis::Wp) => {
                let assign: BTreeMap<Symbol, MPoly> = (1..=max_small_m_index(&self.poly))
                    .map(|k| (Symbol::SmallM(k), wp_moment(k as u32)))
                    .collect();
                self.poly.subst(&assign)
            }
            (from, to) => {
                return Err(Error::Domain(format!("no conversion from {from:?} to {to:?} basis")))
            }
        };
        Ok(VolumePoly::new(self.g, self.n, target, poly))
    }

    /// Tight volume in raw moments: `M_0^{-(2g-2+n)} P(L, m_k = M_k M_0⁻¹)`.
    pub fn raw_moment_form(&self) -> Result<MPoly> {
        let p = match self.basis {
            Basis::Moments => self.clone(),
            Basis::Beta => self.to_basis(Basis::Moments)?,
            Basis::Wp => return Err(Error::Domain("classical volume has no moment form".into())),
        };
        let inv = MPoly::var(Symbol::InvM0);
        let assign: BTreeMap<Symbol, MPoly> = (1..=max_small_m_index(&p.poly))
            .map(|k| (Symbol::SmallM(k), &MPoly::var(Symbol::M(k)) * &inv))
            .collect();
        Ok(&p.poly.subst(&assign) * &inv.pow(self.prefactor_exponent()))
    }

    /// Total degree in the boundary symbols, if nonzero.
    pub fn boundary_degree(&self) -> Option<u32> {
        self.poly
            .weighted_degree_range(|s| i64::from(s.is_boundary()))
            .map(|(_, hi)| hi as u32)
    }

    /// True if invariant under all transpositions of `b_1..b_n`.
    pub fn is_symmetric(&self) -> bool {
        (1..self.n as u16).all(|i| self.poly.swap(Symbol::B(i), Symbol::B(i + 1)) == self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::mpoly::mono;

    #[test]
    fn reverse_moments_low_orders() {
        let r = reverse_moment_polys(2);
        assert_eq!(r[0], MPoly::one());
        assert_eq!(r[1], mono((-1, 3), &[(Symbol::SmallM(1), 1)]));
        // r2 = m1²/9 - m2/15
        let want = &mono((1, 9), &[(Symbol::SmallM(1), 2)]) + &mono((-1, 15), &[(Symbol::SmallM(2), 1)]);
        assert_eq!(r[2], want);
    }

    #[test]
    fn wp_reverse_moments_match_zeta_values() {
        // [u^{2m}] 2πu/sin 2πu = ζ(2m)(2^{2m+1} - 4)/π^{2m}, with ζ from Bernoulli numbers
        let b = crate::ring::rational::bernoulli(24);
        let r = wp_reverse_moments(12);
        for m in 1..=12usize {
            let zeta_over_pi = {
                // ζ(2m) = (-1)^{m+1} B_{2m} (2π)^{2m} / (2 (2m)!)
                let sign = if m % 2 == 1 { 1 } else { -1 };
                let two_pow = BigRational::from_integer(num_bigint::BigInt::from(2).pow(2 * m as u32));
                &b[2 * m] * rat(sign, 2) * two_pow / BigRational::from_integer(factorial(2 * m as u32))
            };
            let factor = BigRational::from_integer(num_bigint::BigInt::from(2).pow(2 * m as u32 + 1))
                - rat(4, 1);
            let want = MPoly::var_pow(Symbol::Q, m as u32).scale(&(zeta_over_pi * factor));
            assert_eq!(r[m], want, "m = {m}");
        }
    }

    #[test]
    fn inconsistent_prefactor_is_rejected() {
        let v = VolumePoly::new(0, 3, Basis::Beta, &MPoly::var(Symbol::Beta(0)) + &MPoly::one());
        assert!(matches!(v.to_basis(Basis::Moments), Err(Error::NotHomogeneous(_))));
        assert!(VolumePoly::new(0, 3, Basis::Wp, MPoly::one()).to_basis(Basis::Beta).is_err());
    }

    #[test]
    fn json_shape() {
        let v = VolumePoly::new(0, 3, Basis::Wp, MPoly::one());
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"g":0,"n":3,"basis":"wp","poly":[{"exponents":{},"coeff":"1/1"}]}"#);
    }
}
