//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational;
use super::Symbol;
use crate::error::{Error, Result};

/// Sorted list of `(symbol, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(Symbol, u32)>;

/// Product of two canonical monomials, cancelling `M_0 · M_0⁻¹`.
pub fn mono_mul(a: &[(Symbol, u32)], b: &[(Symbol, u32)]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.retain(|(_, e)| *e > 0);
    cancel_m0(&mut out);
    out
}

fn cancel_m0(mono: &mut Monomial) {
    let m0 = mono.iter().position(|(s, _)| *s == Symbol::M(0));
    let inv = mono.iter().position(|(s, _)| *s == Symbol::InvM0);
    if let (Some(i), Some(j)) = (m0, inv) {
        let c = mono[i].1.min(mono[j].1);
        mono[i].1 -= c;
        mono[j].1 -= c;
        mono.retain(|(_, e)| *e > 0);
    }
}

fn mono_exp(mono: &[(Symbol, u32)], s: Symbol) -> u32 {
    mono.iter().find(|(t, _)| *t == s).map_or(0, |(_, e)| *e)
}

fn mono_set(mono: &[(Symbol, u32)], s: Symbol, e: u32) -> Monomial {
    let mut out: Monomial = mono.iter().copied().filter(|(t, _)| *t != s).collect();
    if e > 0 {
        let pos = out.partition_point(|(t, _)| *t < s);
        out.insert(pos, (s, e));
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rational::int(c))
    }

    pub fn var(s: Symbol) -> Self {
        Self::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Self::term(vec![(s, e)], BigRational::one())
        }
    }

    /// Single term; the monomial is canonicalized.
    pub fn term(mono: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        let mut m: Monomial = Vec::new();
        let mut sorted = mono;
        sorted.sort();
        for (s, e) in sorted {
            if e > 0 {
                m = mono_mul(&m, &[(s, e)]);
            }
        }
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[(Symbol, u32)]) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The rational value if `self` is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[])
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_term(&self, mono: &[(Symbol, u32)], c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(mono_mul(m, mono), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| *s)).collect()
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| mono_exp(m, s)).max().unwrap_or(0)
    }

    /// Min and max of a weighted degree over all terms.
    pub fn weighted_degree_range(&self, weight: impl Fn(Symbol) -> i64) -> Option<(i64, i64)> {
        let degs: Vec<i64> = self
            .terms
            .keys()
            .map(|m| m.iter().map(|(s, e)| weight(*s) * *e as i64).sum())
            .collect();
        Some((*degs.iter().min()?, *degs.iter().max()?))
    }

    /// Simultaneous substitution of the assigned symbols.
    pub fn subst(&self, assign: &BTreeMap<Symbol, MPoly>) -> MPoly {
        let mut powers: HashMap<(Symbol, u32), MPoly> = HashMap::new();
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let mut kept: Monomial = Vec::new();
            let mut factor = MPoly::constant(c.clone());
            for &(s, e) in mono {
                match assign.get(&s) {
                    Some(v) => {
                        let p = powers.entry((s, e)).or_insert_with(|| v.pow(e));
                        factor = &factor * &*p;
                    }
                    None => kept.push((s, e)),
                }
            }
            if kept.is_empty() {
                out += factor;
            } else {
                out += factor.mul_term(&kept, &BigRational::one());
            }
        }
        out
    }

    /// Substitution keyed by symbol names.
    pub fn subst_named(&self, assign: &[(&str, MPoly)]) -> Result<MPoly> {
        let mut map = BTreeMap::new();
        for (name, v) in assign {
            map.insert(name.parse::<Symbol>()?, v.clone());
        }
        Ok(self.subst(&map))
    }

    /// Renames symbols termwise.
    pub fn relabel(&self, f: impl Fn(Symbol) -> Symbol) -> MPoly {
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let mut m: Monomial = Vec::new();
            for &(s, e) in mono {
                m = mono_mul(&m, &[(f(s), e)]);
            }
            out.add_term(m, c.clone());
        }
        out
    }

    /// `∫₀^{L_i} x f(x) dx`: `b_i^k ↦ b_i^{k+1} / (2k+2)`.
    pub fn integrate_even(&self, i: u16) -> MPoly {
        let s = Symbol::B(i);
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let k = mono_exp(mono, s);
            out.add_term(mono_set(mono, s, k + 1), c / rational::int(2 * k as i64 + 2));
        }
        out
    }

    /// `(1/L_i) d/dL_i`: `b_i^k ↦ 2k b_i^{k-1}`. Left inverse of [`integrate_even`](Self::integrate_even).
    pub fn derive_even(&self, i: u16) -> MPoly {
        let s = Symbol::B(i);
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let k = mono_exp(mono, s);
            if k > 0 {
                out.add_term(mono_set(mono, s, k - 1), c * rational::int(2 * k as i64));
            }
        }
        out
    }

    /// Ordinary partial derivative in `s`.
    pub fn partial(&self, s: Symbol) -> MPoly {
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let k = mono_exp(mono, s);
            if k > 0 {
                out.add_term(mono_set(mono, s, k - 1), c * rational::int(k as i64));
            }
        }
        out
    }

    /// Groups terms by the exponent of `s`, removing `s` from the monomials.
    pub fn split_by(&self, s: Symbol) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let k = mono_exp(mono, s);
            out.entry(k).or_default().add_term(mono_set(mono, s, 0), c.clone());
        }
        out
    }

    /// Coefficient of `s^k` as a polynomial in the remaining symbols.
    pub fn coeff_of(&self, s: Symbol, k: u32) -> MPoly {
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            if mono_exp(mono, s) == k {
                out.add_term(mono_set(mono, s, 0), c.clone());
            }
        }
        out
    }

    /// Swaps two symbols.
    pub fn swap(&self, a: Symbol, b: Symbol) -> MPoly {
        self.relabel(|s| if s == a { b } else if s == b { a } else { s })
    }

    /// Evaluates the assigned symbols numerically; the remainder stays symbolic.
    pub fn eval_partial_f64(&self, value: &dyn Fn(Symbol) -> Option<f64>) -> BTreeMap<Monomial, f64> {
        let mut out: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut v = rational::to_f64(c);
            let mut kept: Monomial = Vec::new();
            for &(s, e) in mono {
                match value(s) {
                    Some(x) => v *= x.powi(e as i32),
                    None => kept.push((s, e)),
                }
            }
            *out.entry(kept).or_insert(0.0) += v;
        }
        out
    }

    /// Full numeric evaluation; `None` if a symbol has no value.
    pub fn eval_f64(&self, value: &dyn Fn(Symbol) -> Option<f64>) -> Option<f64> {
        let mut total = 0.0;
        for (mono, c) in &self.terms {
            let mut v = rational::to_f64(c);
            for &(s, e) in mono {
                v *= value(s)?.powi(e as i32);
            }
            total += v;
        }
        Some(total)
    }

    /// Maps into another ring: assigned symbols become ring elements, the rest of
    /// each term is carried over by `lift`.
    pub fn eval_ring<C: super::Ring>(&self, value: &dyn Fn(Symbol) -> Option<C>, lift: &dyn Fn(MPoly) -> C) -> C {
        let mut groups: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let (hit, kept): (Monomial, Monomial) = mono.iter().partition(|(s, _)| value(*s).is_some());
            groups.entry(hit).or_insert_with(MPoly::zero).add_term(kept, c.clone());
        }
        let mut total = C::zero();
        for (hit, rest) in groups {
            let mut v = lift(rest);
            for (s, e) in hit {
                let x = value(s).expect("assigned");
                for _ in 0..e {
                    v = v.mul_ref(&x);
                }
            }
            total = total.add_ref(&v);
        }
        total
    }

    /// Terms in presentation order: descending boundary degree, boundary exponents
    /// descending lexicographically, then descending degree in the other symbols.
    fn display_order(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(m, _)| {
            let b: Vec<(Symbol, u32)> = m.iter().copied().filter(|(s, _)| s.is_boundary()).collect();
            let rest: Vec<(Symbol, u32)> = m.iter().copied().filter(|(s, _)| !s.is_boundary()).collect();
            let bdeg: u32 = b.iter().map(|(_, e)| e).sum();
            let rdeg: u32 = rest.iter().map(|(_, e)| e).sum();
            let bkey: Vec<(Reverse<Symbol>, u32)> = b.iter().map(|&(s, e)| (Reverse(s), e)).collect();
            let rkey: Vec<(Reverse<Symbol>, u32)> = rest.iter().map(|&(s, e)| (Reverse(s), e)).collect();
            (Reverse(bdeg), Reverse(bkey), Reverse(rdeg), Reverse(rkey))
        });
        v
    }

    /// LaTeX rendering with `L_i`, `\pi`, `M_k`, `m_k`, `\beta_k`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (mono, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let num = c.numer().abs();
            let den = c.denom().clone();
            let factors: Vec<String> = mono.iter().map(|&(s, e)| latex_power(s, e)).collect();
            let body = factors.join(" ");
            let top = match (num.is_one(), body.is_empty()) {
                (_, true) => num.to_string(),
                (true, false) => body,
                (false, false) => format!("{num} {body}"),
            };
            if den.is_one() {
                out.push_str(&top);
            } else {
                out.push_str(&format!("\\frac{{{top}}}{{{den}}}"));
            }
        }
        out
    }
}

fn latex_power(s: Symbol, e: u32) -> String {
    let sub = |i: u16| if i < 10 { i.to_string() } else { format!("{{{i}}}") };
    let sup = |k: i64| if (0..10).contains(&k) { k.to_string() } else { format!("{{{k}}}") };
    match s {
        Symbol::Q => format!("\\pi^{}", sup(2 * e as i64)),
        Symbol::B(i) => format!("L_{}^{}", sub(i), sup(2 * e as i64)),
        Symbol::InvM0 => format!("M_0^{}", sup(-(e as i64))),
        Symbol::M(k) | Symbol::SmallM(k) | Symbol::Beta(k) => {
            let base = match s {
                Symbol::M(_) => "M",
                Symbol::SmallM(_) => "m",
                _ => "\\beta",
            };
            if e == 1 {
                format!("{base}_{}", sub(k))
            } else {
                format!("{base}_{}^{}", sub(k), sup(e as i64))
            }
        }
    }
}

fn text_monomial(mono: &[(Symbol, u32)]) -> String {
    mono.iter()
        .map(|&(s, e)| if e == 1 { s.name() } else { format!("{}^{}", s.name(), e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (mono, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let num = c.numer().abs();
            let den = c.denom();
            let body = text_monomial(mono);
            let top = match (num.is_one(), body.is_empty()) {
                (_, true) => num.to_string(),
                (true, false) => body,
                (false, false) => format!("{num}*{body}"),
            };
            if den.is_one() {
                f.write_str(&top)?;
            } else {
                write!(f, "{top}/{den}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl super::Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
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
        MPoly::constant(r.clone())
    }
    /// Units are nonzero rationals times powers of `M_0` or `M_0⁻¹`.
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (mono, c) = self.terms.iter().next()?;
        let mut inv: Monomial = Vec::new();
        for &(s, e) in mono {
            let t = match s {
                Symbol::M(0) => Symbol::InvM0,
                Symbol::InvM0 => Symbol::M(0),
                _ => return None,
            };
            inv = mono_mul(&inv, &[(t, e)]);
        }
        Some(MPoly::term(inv, c.recip()))
    }
    fn scale(&self, r: &BigRational) -> Self {
        MPoly::scale(self, r)
    }
}

impl From<BigRational> for MPoly {
    fn from(c: BigRational) -> Self {
        MPoly::constant(c)
    }
}

impl From<Symbol> for MPoly {
    fn from(s: Symbol) -> Self {
        MPoly::var(s)
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<MPoly> for MPoly {
    fn add_assign(&mut self, rhs: MPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += lhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        self += rhs;
        self
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(mut self, rhs: MPoly) -> MPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exponents: BTreeMap<String, u32>,
    coeff: String,
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm {
                exponents: m.iter().map(|(s, e)| (s.name(), *e)).collect(),
                coeff: format!("{}/{}", c.numer(), c.denom()),
            })
            .collect();
        list.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<JsonTerm>::deserialize(de)?;
        let mut out = MPoly::zero();
        for t in list {
            let c = rational::parse(&t.coeff)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))?;
            let mut mono = Vec::new();
            for (name, e) in t.exponents {
                let s: Symbol = name.parse().map_err(|e: Error| D::Error::custom(e.to_string()))?;
                mono.push((s, e));
            }
            out += MPoly::term(mono, c);
        }
        Ok(out)
    }
}

/// Convenience: `c · Π s^e` with an integer-ratio coefficient.
pub fn mono(c: (i64, i64), factors: &[(Symbol, u32)]) -> MPoly {
    MPoly::term(factors.to_vec(), rational::rat(c.0, c.1))
}

/// Exact rational from a big integer.
pub fn big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::rat;
    use crate::ring::Ring;

    fn q() -> MPoly {
        MPoly::var(Symbol::Q)
    }
    fn b(i: u16) -> MPoly {
        MPoly::var(Symbol::B(i))
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&q() + &b(1)) * &(&q() - &b(1));
        assert_eq!(p, &q().pow(2) - &b(1).pow(2));
    }

    #[test]
    fn zero_annihilates() {
        let p = &q() + &b(3).pow(2);
        assert!((&MPoly::zero() * &p).is_zero());
        assert!((&p - &p).terms.is_empty());
    }

    #[test]
    fn m0_cancels_against_inverse() {
        let p = &MPoly::var(Symbol::M(0)) * &MPoly::var_pow(Symbol::InvM0, 3);
        assert_eq!(p, MPoly::var_pow(Symbol::InvM0, 2));
        let inv = MPoly::var_pow(Symbol::InvM0, 2).scale(&rat(3, 2)).try_inverse().unwrap();
        assert_eq!(inv, MPoly::var_pow(Symbol::M(0), 2).scale(&rat(2, 3)));
        assert!(b(1).try_inverse().is_none());
    }

    #[test]
    fn p04_specializes_to_wp() {
        let m1 = MPoly::var(Symbol::SmallM(1));
        let half_sum = (1..=4).map(b).fold(MPoly::zero(), |a, x| a + x).scale(&rat(1, 2));
        let p04 = &half_sum - &m1;
        let got = p04.subst_named(&[("m1", q().scale(&rat(-2, 1)))]).unwrap();
        assert_eq!(got, &half_sum + &q().scale(&rat(2, 1)));
        assert_eq!(p04.subst(&BTreeMap::new()), p04);
        assert!(p04.subst_named(&[("x7", q())]).is_err());
    }

    #[test]
    fn beta_to_raw_moments_in_t11() {
        // T11 in reverse moments, then β0 -> 1/M0, β1 -> -M1/(3 M0²)
        let t11 = &MPoly::var(Symbol::Beta(1)).scale(&rat(1, 8))
            + &(&MPoly::var(Symbol::Beta(0)) * &b(1)).scale(&rat(1, 48));
        let got = t11
            .subst_named(&[
                ("beta0", MPoly::var(Symbol::InvM0)),
                ("beta1", mono((-1, 3), &[(Symbol::M(1), 1), (Symbol::InvM0, 2)])),
            ])
            .unwrap();
        let want = &mono((-1, 24), &[(Symbol::M(1), 1), (Symbol::InvM0, 2)])
            + &mono((1, 48), &[(Symbol::B(1), 1), (Symbol::InvM0, 1)]);
        assert_eq!(got, want);
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(MPoly::one().integrate_even(1), b(1).scale(&rat(1, 2)));
        assert_eq!(b(1).integrate_even(1), b(1).pow(2).scale(&rat(1, 4)));
        assert_eq!(MPoly::one().integrate_even(2), b(2).scale(&rat(1, 2)));
        let p = &b(1).pow(3) + &q();
        assert_eq!(p.integrate_even(1).derive_even(1), p);
    }

    #[test]
    fn split_and_partial() {
        let p = &(&b(1).pow(2) * &q()) + &b(2);
        let parts = p.split_by(Symbol::B(1));
        assert_eq!(parts[&2], q());
        assert_eq!(parts[&0], b(2));
        assert_eq!(p.partial(Symbol::B(1)), (&b(1) * &q()).scale(&rat(2, 1)));
        assert_eq!(p.coeff_of(Symbol::B(1), 2), q());
    }

    #[test]
    fn json_round_trip() {
        let p = &mono((-3, 7), &[(Symbol::B(2), 2), (Symbol::SmallM(1), 1)]) + &MPoly::int(5);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"coeff\":\"-3/7\""));
        assert!(s.contains("\"b2\":2"));
        let back: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<MPoly>(r#"[{"exponents":{"zz":1},"coeff":"1/2"}]"#).is_err());
    }

    #[test]
    fn renderings() {
        let v11 = &b(1).scale(&rat(1, 48)) + &q().scale(&rat(1, 12));
        assert_eq!(v11.to_latex(), "\\frac{L_1^2}{48} + \\frac{\\pi^2}{12}");
        assert_eq!(v11.to_string(), "b1/48 + pi2/12");
        assert_eq!(MPoly::one().to_string(), "1");
        let p = &b(1).pow(2).scale(&rat(-3, 2)) + &MPoly::var(Symbol::InvM0);
        assert_eq!(p.to_latex(), "-\\frac{3 L_1^4}{2} + M_0^{-1}");
        assert_eq!(p.to_string(), "-3*b1^2/2 + invM0");
    }
}
