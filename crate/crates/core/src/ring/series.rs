//! Truncated power series and Laurent series over a generic coefficient ring.

use num_rational::BigRational;

use super::Ring;
use crate::error::{Error, Result};

/// `Σ_{k ≤ N} c_k x^k + O(x^{N+1})`; `order = None` marks an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    pub var: &'static str,
    coeffs: Vec<C>,
    order: Option<usize>,
}

impl<C: Ring> TruncSeries<C> {
    pub fn new(var: &'static str, coeffs: Vec<C>, order: usize) -> Self {
        let mut s = Self { var, coeffs, order: Some(order) };
        s.normalize();
        s
    }

    pub fn exact(var: &'static str, coeffs: Vec<C>) -> Self {
        let mut s = Self { var, coeffs, order: None };
        s.normalize();
        s
    }

    pub fn constant(var: &'static str, c: C) -> Self {
        Self::exact(var, vec![c])
    }

    /// The series `x`.
    pub fn variable(var: &'static str) -> Self {
        Self::exact(var, vec![C::zero(), C::one()])
    }

    fn normalize(&mut self) {
        if let Some(n) = self.order {
            self.coeffs.truncate(n + 1);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    /// Coefficient of `x^k`; errors beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Result<C> {
        if let Some(n) = self.order {
            if k > n {
                return Err(Error::Truncation { requested: k as i64, available: n as i64 });
            }
        }
        Ok(self.coeffs.get(k).cloned().unwrap_or_else(C::zero))
    }

    /// Stored coefficients `c_0..` (trailing zeros dropped).
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |n| n.min(order));
        Self::new(self.var, self.coeffs.clone(), order)
    }

    fn join_var(&self, other: &Self) -> &'static str {
        if self.var.is_empty() {
            other.var
        } else {
            debug_assert!(other.var.is_empty() || other.var == self.var, "mixed series variables");
            self.var
        }
    }

    fn join_order(&self, other: &Self) -> Option<usize> {
        match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = C::zero();
        let coeffs = (0..len)
            .map(|k| f(self.coeffs.get(k).unwrap_or(&zero), other.coeffs.get(k).unwrap_or(&zero)))
            .collect();
        let mut s = Self { var: self.join_var(other), coeffs, order: self.join_order(other) };
        s.normalize();
        s
    }

    pub fn mul_trunc(&self, other: &Self) -> Self {
        let order = self.join_order(other);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self { var: self.join_var(other), coeffs: vec![], order };
        }
        let mut top = self.coeffs.len() + other.coeffs.len() - 2;
        if let Some(n) = order {
            top = top.min(n);
        }
        let mut coeffs = vec![C::zero(); top + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(top + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(top + 1 - i) {
                coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
            }
        }
        let mut s = Self { var: self.join_var(other), coeffs, order };
        s.normalize();
        s
    }

    /// Multiplicative inverse to the truncation order (an exact series needs `order` given).
    pub fn recip_to(&self, order: usize) -> Result<Self> {
        let n = self.order.map_or(order, |k| k.min(order));
        let c0 = self.coeffs.first().ok_or(Error::NotInvertible)?;
        let inv0 = c0.try_inverse().ok_or(Error::NotInvertible)?;
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
            }
            out.push(acc.mul_ref(&inv0).neg_ref());
        }
        Ok(Self::new(self.var, out, n))
    }

    pub fn recip(&self) -> Result<Self> {
        match self.order {
            Some(n) => self.recip_to(n),
            None if self.coeffs.len() <= 1 => {
                let c0 = self.coeffs.first().ok_or(Error::NotInvertible)?;
                Ok(Self::exact(self.var, vec![c0.try_inverse().ok_or(Error::NotInvertible)?]))
            }
            None => Err(Error::NotInvertible),
        }
    }

    pub fn scale_by(&self, c: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul_ref(c)).collect();
        let mut s = Self { var: self.var, coeffs, order: self.order };
        s.normalize();
        s
    }

    /// Evaluates a polynomial `Σ p_k y^k` at `y = self` by Horner's rule.
    pub fn compose_into(&self, poly: &[C]) -> Self {
        let mut acc = Self { var: self.var, coeffs: vec![], order: None };
        for c in poly.iter().rev() {
            acc = acc.mul_trunc(self).add_ref(&Self::constant(self.var, c.clone()));
        }
        acc
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let mut s = TruncSeries { var: self.var, coeffs: self.coeffs.iter().map(f).collect(), order: self.order };
        s.normalize();
        s
    }
}

impl<C: Ring> Ring for TruncSeries<C> {
    fn zero() -> Self {
        Self { var: "", coeffs: vec![], order: None }
    }
    fn one() -> Self {
        Self { var: "", coeffs: vec![C::one()], order: None }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.add_ref(b))
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.sub_ref(b))
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_trunc(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.map(|c| c.neg_ref())
    }
    fn from_rational(r: &BigRational) -> Self {
        Self::exact("", vec![C::from_rational(r)])
    }
    fn try_inverse(&self) -> Option<Self> {
        self.recip().ok()
    }
}

/// `Σ_{k ≥ min_exp} c_k x^k`, known up to exponent `prec` inclusive (`None`: exact).
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    pub var: &'static str,
    min_exp: i64,
    coeffs: Vec<C>,
    prec: Option<i64>,
}

impl<C: Ring> LaurentSeries<C> {
    pub fn new(var: &'static str, min_exp: i64, coeffs: Vec<C>, prec: Option<i64>) -> Self {
        let mut s = Self { var, min_exp, coeffs, prec };
        s.normalize();
        s
    }

    pub fn zero(var: &'static str) -> Self {
        Self { var, min_exp: 0, coeffs: vec![], prec: None }
    }

    /// Single term `c x^e`.
    pub fn monomial(var: &'static str, e: i64, c: C) -> Self {
        Self::new(var, e, vec![c], None)
    }

    fn normalize(&mut self) {
        if let Some(p) = self.prec {
            let keep = (p - self.min_exp + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero series).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Result<C> {
        if let Some(p) = self.prec {
            if e > p {
                return Err(Error::Truncation { requested: e, available: p });
            }
        }
        let idx = e - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Ok(C::zero());
        }
        Ok(self.coeffs[idx as usize].clone())
    }

    /// Coefficient at `x^{-1}`.
    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    fn join_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() && self.prec.is_none() {
            return other.clone();
        }
        if other.is_zero() && other.prec.is_none() {
            return self.clone();
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().max(other.max_exp());
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.raw(e);
                let b = other.raw(e);
                a.add_ref(&b)
            })
            .collect();
        Self::new(self.var, lo, coeffs, Self::join_prec(self.prec, other.prec))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.var, self.min_exp, self.coeffs.iter().map(|c| c.neg_ref()).collect(), self.prec)
    }

    fn raw(&self, e: i64) -> C {
        let idx = e - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            C::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Product; precision is `min(a.prec + b.min, b.prec + a.min)`.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = Self::join_prec(
            self.prec.map(|p| p + other.min_exp),
            other.prec.map(|p| p + self.min_exp),
        );
        if self.is_zero() || other.is_zero() {
            return Self { var: self.var, min_exp: 0, coeffs: vec![], prec };
        }
        let lo = self.min_exp + other.min_exp;
        let mut hi = self.max_exp() + other.max_exp();
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if hi < lo {
            return Self { var: self.var, min_exp: 0, coeffs: vec![], prec };
        }
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                coeffs[k] = coeffs[k].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(self.var, lo, coeffs, prec)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries::new(self.var, self.min_exp, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Embeds a power series (exponents ≥ 0).
    pub fn from_trunc(s: &TruncSeries<C>) -> Self {
        Self::new(s.var, 0, s.coeffs().to_vec(), s.order().map(|n| n as i64))
    }
}
