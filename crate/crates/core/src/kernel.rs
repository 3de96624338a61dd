//! Tight volumes `T_{g,n}` by the generalized Mirzakhani recursion, evaluated on
//! coefficient tables through the kernel moment identities.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::Result;
use crate::memo::Memo;
use crate::ring::rational::{fact_rat, rat};
use crate::ring::{MPoly, Symbol};
use crate::volume::{check_stable, is_stable, Basis, VolumePoly};

fn beta(m: u32) -> MPoly {
    MPoly::var(Symbol::Beta(m as u16))
}

fn b(i: u16) -> Symbol {
    Symbol::B(i)
}

/// Weight multiplying `(2i-1)!·[x^{2i-2}] T_{g,n-1}` in the `j`-th boundary term:
/// `(1/2L₁)∫₀^{L₁}dt Σ_m β_m ((t+L_j)^{2e} + (t-L_j)^{2e})/(2e)!`, `e = i - m`.
pub fn single_moment_weight(i: u32, j: u16) -> MPoly {
    let mut out = MPoly::zero();
    for m in 0..=i {
        let e = i - m;
        let mut inner = MPoly::zero();
        for s in 0..=e {
            let c = (fact_rat(2 * s) * fact_rat(2 * e - 2 * s + 1)).recip();
            inner += MPoly::term(vec![(b(j), s), (b(1), e - s)], c);
        }
        out += &beta(m) * &inner;
    }
    out
}

/// Weight multiplying `(2i-1)!(2j-1)!·[x^{2i-2} y^{2j-2}]` in the two-slot terms:
/// `(1/2L₁)∫₀^{L₁}dt Σ_m β_m t^{2k}/(2k)!` with `k = i + j - m`.
pub fn double_moment_weight(i: u32, j: u32) -> MPoly {
    let top = i + j;
    let mut out = MPoly::zero();
    for m in 0..=top {
        let k = top - m;
        let c = (rat(2, 1) * fact_rat(2 * k + 1)).recip();
        out += &beta(m) * &MPoly::term(vec![(b(1), k)], c);
    }
    out
}

/// Splits by the power of `b_1` and renames the remaining slots `2, 3, ..` to `labels`.
fn first_slot_table(p: &MPoly, labels: &[u16]) -> BTreeMap<u32, MPoly> {
    p.split_by(b(1))
        .into_iter()
        .map(|(a, c)| {
            let c = c.relabel(|s| match s {
                Symbol::B(k) if k >= 2 => Symbol::B(labels[k as usize - 2]),
                other => other,
            });
            (a, c)
        })
        .collect()
}

fn odd_fact(a: u32) -> BigRational {
    fact_rat(2 * a + 1)
}

static TIGHT: Memo<(u32, u32), VolumePoly> = Memo::new();

/// `T_{g,n}` in the reverse-moment basis.
pub fn tight_volume(g: u32, n: u32) -> Result<Arc<VolumePoly>> {
    check_stable(g, n)?;
    if n == 0 {
        return Err(crate::Error::OutOfRange { g, n, reason: "the recursion needs n ≥ 1".into() });
    }
    TIGHT.get_or_compute(&(g, n), || compute(g, n))
}

fn compute(g: u32, n: u32) -> Result<VolumePoly> {
    let poly = match (g, n) {
        (0, 3) => beta(0),
        (1, 1) => &beta(1).scale(&rat(1, 8)) + &(&beta(0) * &MPoly::var(b(1))).scale(&rat(1, 48)),
        _ => recurse(g, n)?,
    };
    Ok(VolumePoly::new(g, n, Basis::Beta, poly))
}

fn recurse(g: u32, n: u32) -> Result<MPoly> {
    let others: Vec<u16> = (2..=n as u16).collect();
    // coefficient tables of the two-slot terms, keyed by a + b
    let mut paired: BTreeMap<u32, MPoly> = BTreeMap::new();

    if g >= 1 && is_stable(g - 1, n + 1) {
        let t = tight_volume(g - 1, n + 1)?;
        for (a, rest) in t.poly.split_by(b(1)) {
            for (bb, c) in rest.split_by(b(2)) {
                let c = c.relabel(|s| match s {
                    Symbol::B(k) if k >= 3 => Symbol::B(k - 1),
                    other => other,
                });
                let f = odd_fact(a) * odd_fact(bb);
                *paired.entry(a + bb).or_default() += c.scale(&f);
            }
        }
    }

    for g1 in 0..=g {
        let g2 = g - g1;
        for mask in 0u32..(1 << others.len()) {
            let (left, right): (Vec<u16>, Vec<u16>) =
                others.iter().enumerate().fold((vec![], vec![]), |(mut l, mut r), (k, &lab)| {
                    if mask & (1 << k) != 0 {
                        l.push(lab)
                    } else {
                        r.push(lab)
                    }
                    (l, r)
                });
            let (n1, n2) = (1 + left.len() as u32, 1 + right.len() as u32);
            if !is_stable(g1, n1) || !is_stable(g2, n2) {
                continue;
            }
            let ta = first_slot_table(&tight_volume(g1, n1)?.poly, &left);
            let tb = first_slot_table(&tight_volume(g2, n2)?.poly, &right);
            for (a, ca) in &ta {
                let ca = ca.scale(&odd_fact(*a));
                for (bb, cb) in &tb {
                    let f = odd_fact(*bb);
                    *paired.entry(a + bb).or_default() += (&ca * cb).scale(&f);
                }
            }
        }
    }

    let mut out = MPoly::zero();
    for (s, c) in paired {
        out += &c * &double_moment_weight(1, s + 1);
    }

    if n >= 2 && is_stable(g, n - 1) {
        let t = tight_volume(g, n - 1)?;
        for j in 2..=n as u16 {
            let labels: Vec<u16> = others.iter().copied().filter(|&k| k != j).collect();
            for (a, c) in first_slot_table(&t.poly, &labels) {
                out += &c.scale(&odd_fact(a)) * &single_moment_weight(a + 1, j);
            }
        }
    }
    Ok(out)
}

/// Classical Weil–Petersson volume: `T_{g,n}` at vanishing weight.
pub fn wp_volume(g: u32, n: u32) -> Result<VolumePoly> {
    tight_volume(g, n)?.to_basis(Basis::Wp)
}
