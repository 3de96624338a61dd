//! Moment data as power series in a coupling `w`, for `μ = w·μ_base`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::moments::MomentData;
use super::weight::Weight;
use crate::error::{Error, Result};
use crate::ring::rational::{self, fact_rat, factorial};
use crate::ring::{MPoly, Ring, Symbol, TruncSeries};
use crate::volume::{Basis, VolumePoly};

pub const COUPLING: &str = "w";

/// Even moments `μ_base(L^{2n})` of the base weight, plus the value of `π²`.
pub struct FormalInput<C> {
    pub pi2: C,
    pub base: Box<dyn Fn(u32) -> C + Send + Sync>,
}

impl FormalInput<MPoly> {
    /// Exact input from a weight: every double is taken at its exact binary value.
    pub fn from_weight(weight: &Weight) -> Result<Self> {
        let exact = |x: f64| rational::from_f64(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")));
        let mut atoms = Vec::new();
        for a in &weight.atoms {
            atoms.push((exact(a.weight)?, exact(a.square_length())?));
        }
        let brane = match weight.fzzt {
            Some(f) => Some((exact(-(-f.s0).exp())?, exact(f.z)?)),
            None => None,
        };
        Ok(Self {
            pi2: MPoly::var(Symbol::Q),
            base: Box::new(move |n| {
                let mut total = BigRational::from_integer(BigInt::from(0));
                for (w, b) in &atoms {
                    total += w * num_traits::pow(b.clone(), n as usize);
                }
                if let Some((c, z)) = &brane {
                    // -e^{-s0} (2n)! / z^{2n+1}
                    total += c * fact_rat(2 * n) / num_traits::pow(z.clone(), 2 * n as usize + 1);
                }
                MPoly::constant(total)
            }),
        })
    }

    /// A unit atom at a symbolic length: `μ_base(L^{2n}) = b^n` for the given boundary symbol.
    pub fn symbolic_atom(boundary: u16) -> Self {
        Self { pi2: MPoly::var(Symbol::Q), base: Box::new(move |n| MPoly::var_pow(Symbol::B(boundary), n)) }
    }
}

impl FormalInput<f64> {
    pub fn numeric(weight: &Weight) -> Self {
        let w = weight.clone();
        Self { pi2: std::f64::consts::PI.powi(2), base: Box::new(move |n| w.even_moment(n)) }
    }
}

fn series<C: Ring>(order: usize, coeffs: Vec<C>) -> TruncSeries<C> {
    TruncSeries::new(COUPLING, coeffs, order)
}

/// Taylor coefficients `z_n` of `Z(r)` as series in `w`, for `n = 0..=top`.
fn string_coefficients<C: Ring>(input: &FormalInput<C>, order: usize, top: usize) -> Vec<TruncSeries<C>> {
    let minus_two_q = input.pi2.scale(&BigRational::from_integer(BigInt::from(-2)));
    let mut out = Vec::with_capacity(top + 1);
    let mut qpow = C::one();
    for n in 0..=top as u32 {
        let free = if n == 0 {
            C::zero()
        } else {
            if n > 1 {
                qpow = qpow.mul_ref(&minus_two_q);
            }
            qpow.scale(&(fact_rat(n - 1) * fact_rat(n)).recip())
        };
        let norm = BigRational::new(BigInt::from(1), BigInt::from(2).pow(n) * factorial(n) * factorial(n));
        let atom = (input.base)(n).scale(&norm).neg_ref();
        out.push(series(order, vec![free, atom]));
    }
    out
}

fn horner<C: Ring>(coeffs: &[TruncSeries<C>], x: &TruncSeries<C>) -> TruncSeries<C> {
    let mut acc = TruncSeries::<C>::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul_ref(x).add_ref(c);
    }
    acc
}

/// `R(w)` to order `N` from the fixed point `r ↦ r - Z(r)`.
pub fn formal_r<C: Ring>(input: &FormalInput<C>, order: usize) -> TruncSeries<C> {
    let z = string_coefficients(input, order, order + 1);
    let mut r = series(order, vec![]);
    for _ in 0..=order {
        r = r.sub_ref(&horner(&z, &r));
    }
    r
}

/// Moment data to order `N` in `w` and order `k` in the moments.
pub fn formal_moments<C: Ring>(input: &FormalInput<C>, order: usize, k: usize) -> Result<MomentData<TruncSeries<C>>> {
    let z = string_coefficients(input, order, order + k + 2);
    let r = formal_r(input, order);
    let mut m = Vec::with_capacity(k + 1);
    for j in 0..=k {
        // Z^{(j+1)}(r) = Σ_n z_n n!/(n-j-1)! r^{n-j-1}
        let shifted: Vec<TruncSeries<C>> = (j + 1..=j + 1 + order)
            .map(|n| z[n].scale(&(fact_rat(n as u32) / fact_rat((n - j - 1) as u32))))
            .collect();
        m.push(horner(&shifted, &r));
    }
    let t = (0..=k as u32)
        .map(|j| {
            let norm = BigRational::new(BigInt::from(2), BigInt::from(4).pow(j) * factorial(j));
            series(order, vec![C::zero(), (input.base)(j).scale(&norm)])
        })
        .collect();
    MomentData::assemble(r, m, t)
}

/// `T_{g,n}(L; μ]` as a series in `w`, from a tight volume in the `β` basis.
pub fn tight_series(t: &VolumePoly, md: &MomentData<TruncSeries<MPoly>>) -> Result<TruncSeries<MPoly>> {
    if t.basis != Basis::Beta {
        return Err(Error::Domain("formal expansion needs a tight volume in the beta basis".into()));
    }
    let needed = 3 * t.g as usize + t.n as usize - 3;
    if md.beta.len() <= needed {
        return Err(Error::Truncation { requested: needed as i64, available: md.beta.len() as i64 - 1 });
    }
    let value = |s: Symbol| match s {
        Symbol::Beta(m) => md.beta.get(m as usize).cloned(),
        _ => None,
    };
    let lift = |c: MPoly| TruncSeries::constant(COUPLING, c);
    Ok(t.poly.eval_ring(&value, &lift))
}

/// Sums a series in `w` at a numeric coupling.
pub fn eval_series(s: &TruncSeries<f64>, w: f64) -> f64 {
    s.coeffs().iter().rev().fold(0.0, |acc, c| acc * w + c)
}

/// Numeric values of an exact series, with `π²` substituted.
pub fn to_numeric(s: &TruncSeries<MPoly>) -> Result<TruncSeries<f64>> {
    let pi2 = std::f64::consts::PI.powi(2);
    let coeffs = s
        .coeffs()
        .iter()
        .map(|c| c.eval_f64(&|sym| (sym == Symbol::Q).then_some(pi2)).ok_or_else(|| Error::UnknownSymbol(format!("{c}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(match s.order() {
        Some(n) => TruncSeries::new(s.var, coeffs, n),
        None => TruncSeries::exact(s.var, coeffs),
    })
}
