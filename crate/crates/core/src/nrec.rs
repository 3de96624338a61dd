//! Normalized tight volumes `P_{g,n}(L, m)` by recursion in `n`, seeded by
//! ψ-class intersection numbers from the Virasoro constraints.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::memo::Memo;
use crate::ring::rational::{double_factorial, fact_rat, int, rat};
use crate::ring::{MPoly, Monomial, Symbol};
use crate::volume::{is_stable, Basis, VolumePoly};

fn dfact(n: i64) -> BigRational {
    BigRational::from_integer(double_factorial(n))
}

static PSI: Memo<(u32, Vec<u32>), BigRational> = Memo::new();

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`; zero unless `Σ d_i = 3g-3+n` and `(g,n)` is stable.
pub fn psi_intersection(g: u32, d: &[u32]) -> BigRational {
    let n = d.len() as i64;
    let total: i64 = d.iter().map(|&x| x as i64).sum();
    if !is_stable(g, d.len() as u32) || total != 3 * g as i64 - 3 + n {
        return BigRational::zero();
    }
    let mut key = d.to_vec();
    key.sort_unstable();
    let v = PSI.get_or_compute(&(g, key.clone()), || Ok(psi_compute(g, &key)));
    (*v.expect("psi recursion is infallible")).clone()
}

fn psi_compute(g: u32, d: &[u32]) -> BigRational {
    if g == 0 && d == [0, 0, 0] {
        return BigRational::one();
    }
    if g == 1 && d == [1] {
        return rat(1, 24);
    }
    if d[0] == 0 {
        // string equation
        let rest = &d[1..];
        let mut acc = BigRational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut e = rest.to_vec();
                e[j] -= 1;
                acc += psi_intersection(g, &e);
            }
        }
        return acc;
    }
    // lead with the largest index: τ_{p+1}
    let p = d[d.len() - 1] as i64 - 1;
    let rest = &d[..d.len() - 1];
    let mut acc = BigRational::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let mut e = rest.to_vec();
        e[j] = (dj + p) as u32;
        acc += dfact(2 * dj + 2 * p + 1) / dfact(2 * dj - 1) * psi_intersection(g, &e);
    }
    let half = rat(1, 2);
    for r in 0..p {
        let s = p - 1 - r;
        let w = &half * dfact(2 * r + 1) * dfact(2 * s + 1);
        if g >= 1 {
            let mut e = rest.to_vec();
            e.push(r as u32);
            e.push(s as u32);
            acc += &w * psi_intersection(g - 1, &e);
        }
        let m = rest.len();
        for g1 in 0..=g {
            for mask in 0u32..(1 << m) {
                let mut left = vec![r as u32];
                let mut right = vec![s as u32];
                for (k, &x) in rest.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        left.push(x)
                    } else {
                        right.push(x)
                    }
                }
                let a = psi_intersection(g1, &left);
                if a.is_zero() {
                    continue;
                }
                acc += &w * a * psi_intersection(g - g1, &right);
            }
        }
    }
    acc / dfact(2 * p + 3)
}

/// Intersection numbers of one genus, keyed by sorted index lists.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct IntersectionTable {
    pub entries: BTreeMap<(u32, Vec<u32>), BigRational>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    g: u32,
    d: Vec<u32>,
    value: String,
}

impl IntersectionTable {
    /// All nonzero `⟨τ_{d_1}⋯τ_{d_n}⟩_g` with `n ≤ max_n` (sorted `d`).
    pub fn for_genus(g: u32, max_n: u32) -> Self {
        let mut entries = BTreeMap::new();
        for n in 1..=max_n {
            if !is_stable(g, n) {
                continue;
            }
            let total = 3 * g + n - 3;
            for d in sorted_compositions(total, n as usize) {
                let v = psi_intersection(g, &d);
                if !v.is_zero() {
                    entries.insert((g, d), v);
                }
            }
        }
        Self { entries }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<JsonEntry> = self
            .entries
            .iter()
            .map(|((g, d), v)| JsonEntry { g: *g, d: d.clone(), value: format!("{}/{}", v.numer(), v.denom()) })
            .collect();
        serde_json::to_value(list).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let list: Vec<JsonEntry> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Domain(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for e in list {
            let value = crate::ring::rational::parse(&e.value)
                .ok_or_else(|| Error::Domain(format!("bad value `{}`", e.value)))?;
            let mut d = e.d;
            d.sort_unstable();
            entries.insert((e.g, d), value);
        }
        Ok(Self { entries })
    }
}

/// Non-decreasing sequences of length `n` summing to `total`.
fn sorted_compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, n: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut x = min;
        while x as usize * n <= total as usize {
            cur.push(x);
            go(total - x, n - 1, x, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    go(total, n, 0, &mut Vec::new(), &mut out);
    out
}

fn small_m(k: u32) -> MPoly {
    MPoly::var(Symbol::SmallM(k as u16))
}

/// `P_{g,0}` for `g ≥ 2` from intersection numbers of `τ_2, τ_3, ..`.
pub fn p_g0(g: u32) -> MPoly {
    let target = 3 * g - 3;
    let mut out = MPoly::zero();
    // d[k-2] = multiplicity of τ_k, with Σ (k-1) d_k = 3g-3
    fn parts(rem: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if k - 1 > rem {
            return;
        }
        for c in 0..=rem / (k - 1) {
            cur.push(c);
            parts(rem - c * (k - 1), k + 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    parts(target, 2, &mut Vec::new(), &mut all);
    for dk in all {
        let mut indices = Vec::new();
        let mut term = MPoly::one();
        for (pos, &c) in dk.iter().enumerate() {
            let k = pos as u32 + 2;
            indices.extend(std::iter::repeat(k).take(c as usize));
            if c > 0 {
                term = &term * &small_m(k - 1).scale(&int(-1)).pow(c).scale(&fact_rat(c).recip());
            }
        }
        let v = psi_intersection(g, &indices);
        if !v.is_zero() {
            out += term.scale(&v);
        }
    }
    out
}

static PTABLE: Memo<(u32, u32), VolumePoly> = Memo::new();

/// `P_{g,n}` (basis `moments`): `T_{g,n} = M_0^{-(2g-2+n)} P_{g,n}(L, M_k/M_0)`.
pub fn p_poly(g: u32, n: u32) -> Result<Arc<VolumePoly>> {
    let ok = is_stable(g, n) || (g >= 2 && n == 0);
    if !ok {
        return Err(Error::Unstable { g, n });
    }
    PTABLE.get_or_compute(&(g, n), || {
        let poly = match (g, n) {
            (0, 3) => MPoly::one(),
            (1, 1) => (&MPoly::var(Symbol::B(1)).scale(&rat(1, 2)) - &small_m(1)).scale(&rat(1, 24)),
            (_, 0) => p_g0(g),
            _ => p_step(g, n, &p_poly(g, n - 1)?.poly),
        };
        Ok(VolumePoly::new(g, n, Basis::Moments, poly))
    })
}

/// One step of the recursion in `n`, from `P_{g,n-1}` in slots `1..n-1`.
fn p_step(g: u32, n: u32, prev: &MPoly) -> MPoly {
    let shifted = prev.relabel(|s| match s {
        Symbol::B(k) => Symbol::B(k + 1),
        other => other,
    });
    let b1 = MPoly::var(Symbol::B(1));
    let half_b1 = b1.scale(&rat(1, 2));
    let mut out = MPoly::zero();
    let top = (3 * g + n) as i64 - 4;
    for p in 1..=top.max(0) as u32 {
        let d = shifted.partial(Symbol::SmallM(p as u16));
        if d.is_zero() {
            continue;
        }
        let pow_term = b1
            .pow(p + 1)
            .scale(&(BigRational::from_integer(BigInt::from(2).pow(p + 1)) * fact_rat(p + 1)).recip());
        let coef = &(&(&small_m(p + 1) - &pow_term) - &(&small_m(1) * &small_m(p))) + &(&half_b1 * &small_m(p));
        out += &coef * &d;
    }
    let dil = (2 * g + n) as i64 - 3;
    out += (&(&half_b1 - &small_m(1)) * &shifted).scale(&int(dil));
    for i in 2..=n as u16 {
        out += shifted.integrate_even(i);
    }
    out
}

/// Weighted degree with `deg b_i = 1`, `deg m_k = k`; `Err` lists offending terms.
pub fn sigma_degree(p: &MPoly) -> std::result::Result<Option<u32>, Vec<(Monomial, u32)>> {
    let deg = |m: &Monomial| -> u32 {
        m.iter()
            .map(|&(s, e)| match s {
                Symbol::B(_) => e,
                Symbol::SmallM(k) => k as u32 * e,
                _ => 0,
            })
            .sum()
    };
    let degs: Vec<(Monomial, u32)> = p.terms().map(|(m, _)| (m.clone(), deg(m))).collect();
    let Some(top) = degs.iter().map(|(_, d)| *d).max() else {
        return Ok(None);
    };
    // the majority degree is taken as the expected one
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for (_, d) in &degs {
        *counts.entry(*d).or_default() += 1;
    }
    let expected = counts.iter().max_by_key(|(d, c)| (**c, **d)).map_or(top, |(d, _)| *d);
    let bad: Vec<(Monomial, u32)> = degs.into_iter().filter(|(_, d)| *d != expected).collect();
    if bad.is_empty() {
        Ok(Some(expected))
    } else {
        Err(bad)
    }
}

/// `P_{g,n}` with `m_k ↦ (-2π²)^k/k!`: the classical volume.
pub fn specialize_wp(p: &VolumePoly) -> Result<VolumePoly> {
    if p.basis != Basis::Moments {
        return Err(Error::Domain("specialize_wp expects the moments basis".into()));
    }
    p.to_basis(Basis::Wp)
}

/// Outcome of checking both identities for one `(g,n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StringDilatonReport {
    pub g: u32,
    pub n: u32,
    pub string_holds: bool,
    pub dilaton_holds: bool,
    /// First monomial where a side disagrees, rendered as text.
    pub first_failure: Option<String>,
}

fn first_difference(lhs: &MPoly, rhs: &MPoly) -> Option<String> {
    let diff = lhs - rhs;
    let first = diff.terms().next().map(|(m, c)| {
        let mono = MPoly::term(m.clone(), BigRational::one());
        format!("coefficient of {mono} differs by {c}")
    });
    first
}

/// Tight volume of `P_{g,n}` in raw moments `M_k`, `M_0⁻¹`.
fn raw_tight(g: u32, n: u32) -> Result<MPoly> {
    p_poly(g, n)?.raw_moment_form()
}

/// Checks the string and dilaton equations for `T_{g,n}` (from the kernel recursion)
/// against `T_{g,n-1}` (or `P_{g,0}` when `n = 1`), exactly.
pub fn string_dilaton_check(g: u32, n: u32) -> Result<StringDilatonReport> {
    let in_range = n >= 1 && (g >= 2 || (g == 1 && n >= 2) || (g == 0 && n >= 4));
    if !in_range {
        return Err(Error::OutOfRange { g, n, reason: "need n ≥ 4 at g = 0, n ≥ 2 at g = 1, n ≥ 1 otherwise".into() });
    }
    let t = crate::kernel::tight_volume(g, n)?.raw_moment_form()?;
    let prev = raw_tight(g, n - 1)?.relabel(|s| match s {
        Symbol::B(k) => Symbol::B(k + 1),
        other => other,
    });

    let mut string_lhs = MPoly::zero();
    let mut dilaton_lhs = MPoly::zero();
    for (p, c) in t.split_by(Symbol::B(1)) {
        let w = BigRational::from_integer(BigInt::from(2).pow(p)) * fact_rat(p);
        string_lhs += &c * &MPoly::var(Symbol::M(p as u16)).scale(&w);
        if p >= 1 {
            dilaton_lhs += &c * &MPoly::var(Symbol::M(p as u16 - 1)).scale(&w);
        }
    }
    let mut string_rhs = MPoly::zero();
    for j in 2..=n as u16 {
        string_rhs += prev.integrate_even(j);
    }
    let dilaton_rhs = prev.scale(&int((2 * g + n) as i64 - 3));

    let s_fail = first_difference(&string_lhs, &string_rhs);
    let d_fail = first_difference(&dilaton_lhs, &dilaton_rhs);
    Ok(StringDilatonReport {
        g,
        n,
        string_holds: s_fail.is_none(),
        dilaton_holds: d_fail.is_none(),
        first_failure: s_fail.map(|s| format!("string: {s}")).or(d_fail.map(|s| format!("dilaton: {s}"))),
    })
}
