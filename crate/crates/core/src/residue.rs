//! Laplace-transformed tight volumes `ω_{g,n}` from the residue recursion on the
//! spectral curve `x = z²`, `y = 2z η(z)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::ring::rational::{fact_rat, int, rat};
use crate::ring::{LaurentSeries, MPoly, Ring, Symbol};
use crate::volume::{check_stable, is_stable, Basis, VolumePoly};

/// Laurent polynomial in `z_1⁻¹, z_2⁻¹, ..`; key entry `i` is the power of `z_{i+1}⁻¹`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ZPoly {
    terms: BTreeMap<Vec<u32>, MPoly>,
}

fn trim(mut key: Vec<u32>) -> Vec<u32> {
    while key.last() == Some(&0) {
        key.pop();
    }
    key
}

impl ZPoly {
    pub fn monomial(key: Vec<u32>, c: MPoly) -> Self {
        let mut p = Self::default();
        p.add_term(key, c);
        p
    }

    fn add_term(&mut self, key: Vec<u32>, c: MPoly) {
        if c.is_zero() {
            return;
        }
        let key = trim(key);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &MPoly)> {
        self.terms.iter()
    }
}

impl Ring for ZPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::monomial(vec![], MPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = Self::default();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let len = ka.len().max(kb.len());
                let key = (0..len)
                    .map(|i| ka.get(i).copied().unwrap_or(0) + kb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(key, ca * cb);
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::monomial(vec![], MPoly::constant(r.clone()))
    }
    fn try_inverse(&self) -> Option<Self> {
        let (k, c) = self.terms.iter().next()?;
        if self.terms.len() == 1 && k.is_empty() {
            Some(Self::monomial(vec![], c.try_inverse()?))
        } else {
            None
        }
    }
}

/// Coefficients of `ω_{g,n} = Σ_k c_k Π z_i^{-2k_i-2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorLaurent {
    pub g: u32,
    pub n: u32,
    pub coeffs: BTreeMap<Vec<u32>, MPoly>,
}

#[derive(Serialize, Deserialize)]
struct JsonCorrelator {
    g: u32,
    n: u32,
    terms: Vec<JsonCorrelatorTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonCorrelatorTerm {
    k: Vec<u32>,
    coeff: MPoly,
}

impl Serialize for CorrelatorLaurent {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        JsonCorrelator {
            g: self.g,
            n: self.n,
            terms: self.coeffs.iter().map(|(k, c)| JsonCorrelatorTerm { k: k.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CorrelatorLaurent {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = JsonCorrelator::deserialize(de)?;
        let mut coeffs = BTreeMap::new();
        for t in j.terms {
            if t.k.len() != j.n as usize {
                return Err(serde::de::Error::custom(format!("exponent vector of length {} for n = {}", t.k.len(), j.n)));
            }
            coeffs.insert(t.k, t.coeff);
        }
        Ok(Self { g: j.g, n: j.n, coeffs })
    }
}

impl CorrelatorLaurent {
    /// Largest `Σ k_i` in the support.
    pub fn max_total_k(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.iter().sum()).max()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n as usize;
        (0..n.saturating_sub(1)).all(|i| {
            self.coeffs.iter().all(|(k, c)| {
                let mut sw = k.clone();
                sw.swap(i, i + 1);
                self.coeffs.get(&sw) == Some(c)
            })
        })
    }

    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> CorrelatorLaurent {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        CorrelatorLaurent { g: self.g, n: self.n, coeffs }
    }
}

fn laplace_factor(k: &[u32]) -> BigRational {
    k.iter().map(|&ki| fact_rat(2 * ki + 1)).product()
}

/// Laplace transform `∫ Π L_i e^{-z_i L_i} dL_i` of a volume polynomial.
pub fn omega_from_t(t: &VolumePoly) -> CorrelatorLaurent {
    let n = t.n as usize;
    let mut coeffs: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
    for (mono, c) in t.poly.terms() {
        let mut k = vec![0u32; n];
        let mut rest = Vec::new();
        for &(s, e) in mono {
            match s {
                Symbol::B(i) if (1..=n as u16).contains(&i) => k[i as usize - 1] = e,
                _ => rest.push((s, e)),
            }
        }
        let f = laplace_factor(&k);
        *coeffs.entry(k).or_default() += MPoly::term(rest, c * f);
    }
    coeffs.retain(|_, c| !c.is_zero());
    CorrelatorLaurent { g: t.g, n: t.n, coeffs }
}

/// Inverse of [`omega_from_t`].
pub fn t_from_omega(w: &CorrelatorLaurent, basis: Basis) -> VolumePoly {
    let mut poly = MPoly::zero();
    for (k, c) in &w.coeffs {
        let mono: Vec<(Symbol, u32)> =
            k.iter().enumerate().map(|(i, &e)| (Symbol::B(i as u16 + 1), e)).collect();
        poly += c.mul_term(&mono, &laplace_factor(k).recip());
    }
    VolumePoly::new(w.g, w.n, basis, poly)
}

const U: &str = "u";

/// `ω_{g',n'}` with first argument `±u` (and optionally second `-u`), the rest placed in z-slots.
fn embed(w: &CorrelatorLaurent, paired: bool, slots: &[usize]) -> LaurentSeries<ZPoly> {
    let skip = if paired { 2 } else { 1 };
    let mut by_exp: BTreeMap<i64, ZPoly> = BTreeMap::new();
    for (k, c) in &w.coeffs {
        let mut uexp = -(2 * k[0] as i64 + 2);
        if paired {
            uexp -= 2 * k[1] as i64 + 2;
        }
        let width = slots.iter().copied().max().map_or(0, |m| m + 1);
        let mut key = vec![0u32; width];
        for (pos, &slot) in slots.iter().enumerate() {
            key[slot] = 2 * k[pos + skip] + 2;
        }
        let entry = by_exp.entry(uexp).or_default();
        *entry = entry.add_ref(&ZPoly::monomial(key, c.clone()));
    }
    from_exponent_map(by_exp, None)
}

fn from_exponent_map(map: BTreeMap<i64, ZPoly>, prec: Option<i64>) -> LaurentSeries<ZPoly> {
    let Some((&lo, _)) = map.iter().next() else {
        return LaurentSeries::new(U, 0, vec![], prec);
    };
    let hi = *map.keys().next_back().unwrap_or(&lo);
    let coeffs = (lo..=hi).map(|e| map.get(&e).cloned().unwrap_or_default()).collect();
    LaurentSeries::new(U, lo, coeffs, prec)
}

/// `ω_{0,2}(±u, z_slot) = Σ_{k ≤ order} (k+1)(±u)^k z_slot^{-k-2}`.
fn omega02_cross(sign: i64, slot: usize, order: i64) -> LaurentSeries<ZPoly> {
    let mut map = BTreeMap::new();
    for k in 0..=order {
        let mut key = vec![0u32; slot + 1];
        key[slot] = k as u32 + 2;
        let c = int((k + 1) * sign.pow(k as u32));
        map.insert(k, ZPoly::monomial(key, MPoly::constant(c)));
    }
    from_exponent_map(map, Some(order))
}

/// A factor of the splitting sum: `ω_{g',1+|I|}(±u, z_I)`; `None` for `ω_{0,1}`.
enum Factor {
    Stable(LaurentSeries<ZPoly>),
    Cross { slot: usize },
}

fn factor(g: u32, labels: &[usize]) -> Result<Option<Factor>> {
    let n = 1 + labels.len() as u32;
    if g == 0 && n == 1 {
        return Ok(None);
    }
    if g == 0 && n == 2 {
        return Ok(Some(Factor::Cross { slot: labels[0] }));
    }
    Ok(Some(Factor::Stable(embed(&*omega(g, n)?, false, labels))))
}

fn realize(f: &Factor, sign: i64, order: i64) -> LaurentSeries<ZPoly> {
    match f {
        // stable correlators are even in u, so the sign is irrelevant
        Factor::Stable(s) => s.clone(),
        Factor::Cross { slot } => omega02_cross(sign, *slot, order),
    }
}

fn min_exp_of(f: &Factor) -> i64 {
    match f {
        Factor::Stable(s) => s.min_exp(),
        Factor::Cross { .. } => 0,
    }
}

static OMEGA: Memo<(u32, u32), CorrelatorLaurent> = Memo::new();

/// `ω_{g,n}` with coefficients in the reverse moments `β_m`.
pub fn omega(g: u32, n: u32) -> Result<Arc<CorrelatorLaurent>> {
    check_stable(g, n)?;
    if n == 0 {
        return Err(Error::OutOfRange { g, n, reason: "correlators need n ≥ 1".into() });
    }
    OMEGA.get_or_compute(&(g, n), || compute_omega(g, n))
}

fn compute_omega(g: u32, n: u32) -> Result<CorrelatorLaurent> {
    let rest: Vec<usize> = (1..n as usize).collect();
    let mut bracket = LaurentSeries::<ZPoly>::zero(U);

    if g >= 1 {
        if g == 1 && n == 1 {
            // ω_{0,2}(u, -u) = 1/(4u²)
            bracket = bracket.add(&LaurentSeries::monomial(U, -2, ZPoly::from_rational(&rat(1, 4))));
        } else if is_stable(g - 1, n + 1) {
            bracket = bracket.add(&embed(&*omega(g - 1, n + 1)?, true, &rest));
        }
    }

    for g1 in 0..=g {
        let g2 = g - g1;
        for mask in 0u32..(1 << rest.len()) {
            let (left, right): (Vec<usize>, Vec<usize>) = rest.iter().partition(|&&s| mask & (1 << (s - 1)) != 0);
            if (g1 == 0 && left.is_empty()) || (g2 == 0 && right.is_empty()) {
                continue;
            }
            let (Some(fa), Some(fb)) = (factor(g1, &left)?, factor(g2, &right)?) else {
                continue;
            };
            let ka = -min_exp_of(&fb);
            let kb = -min_exp_of(&fa);
            let term = realize(&fa, 1, ka).mul(&realize(&fb, -1, kb));
            bracket = bracket.add(&term);
        }
    }

    // Res_u (1/2) Σ_{a,m} β_m z_1^{-2a-2} u^{2a+2m-1} · bracket(u)
    let mut out = ZPoly::default();
    let deepest = -bracket.min_exp();
    for c in 0..=deepest / 2 {
        let coeff = bracket.coeff(-2 * c)?;
        if coeff.is_zero() {
            continue;
        }
        let mut kernel = ZPoly::default();
        for a in 0..=c {
            let m = c - a;
            kernel.add_term(
                vec![2 * a as u32 + 2],
                MPoly::var(Symbol::Beta(m as u16)).scale(&rat(1, 2)),
            );
        }
        out = out.add_ref(&kernel.mul_ref(&coeff));
    }

    let mut coeffs = BTreeMap::new();
    for (key, c) in out.terms() {
        let mut k = Vec::with_capacity(n as usize);
        for i in 0..n as usize {
            let e = key.get(i).copied().unwrap_or(0);
            if e < 2 || e % 2 == 1 {
                return Err(Error::Domain(format!(
                    "ω_{{{g},{n}}}: unexpected z_{} exponent -{e}",
                    i + 1
                )));
            }
            k.push(e / 2 - 1);
        }
        coeffs.insert(k, c.clone());
    }
    Ok(CorrelatorLaurent { g, n, coeffs })
}
