//! Tight decomposition: per-defect-count tight volumes `T_{g,n,p}` and half-tight
//! cylinder volumes `H_p`, recovered from a table of volumes `V_{g,n}`.
//!
//! Labels: `T_{g,n,p}` uses `b_1..b_n` for the tight boundaries and `b_{n+1}..b_{n+p}`
//! for the defects; `H_p` uses `b_1`, `b_2` for the outer and tight boundary and
//! `b_3..b_{2+p}` for the defects. Both hold in the region `L_1 ≥ L_2`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::wp_volume;
use crate::ring::rational::rat;
use crate::ring::{MPoly, Symbol};
use crate::volume::check_stable;

/// First label of the integration variables `K_i`.
const SCRATCH: u16 = 1000;

/// Volumes `V_{g,n}` in the boundary squares and `π²`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VTable {
    cells: BTreeMap<(u32, u32), MPoly>,
}

impl VTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: u32, n: u32, v: MPoly) {
        self.cells.insert((g, n), v);
    }

    pub fn get(&self, g: u32, n: u32) -> Result<&MPoly> {
        self.cells.get(&(g, n)).ok_or_else(|| Error::MissingEntry(format!("V_{{{g},{n}}}")))
    }

    /// Cells read by [`extract_tight`] for `(g, n)` up to `p` defects.
    pub fn required(g: u32, n: u32, p: u32) -> Vec<(u32, u32)> {
        let mut cells: Vec<(u32, u32)> = (0..=p).map(|q| (g, n + q)).collect();
        cells.extend((1..=p).map(|q| (0, 2 + q)));
        cells.sort_unstable();
        cells.dedup();
        cells
    }

    /// Classical volumes for every cell in [`required`](Self::required).
    pub fn classical(g: u32, n: u32, p: u32) -> Result<Self> {
        let mut t = Self::new();
        for (gg, nn) in Self::required(g, n, p) {
            t.insert(gg, nn, wp_volume(gg, nn)?.poly);
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightTables {
    pub g: u32,
    pub n: u32,
    /// `H_0..H_p`; `H_0` is zero.
    pub h: Vec<MPoly>,
    /// `T_{g,n,0}..T_{g,n,p}`.
    pub t: Vec<MPoly>,
}

fn scratch(i: u16) -> Symbol {
    Symbol::B(SCRATCH + i)
}

/// `∫_0^{upper} f(K) K dK` on a polynomial in `k = K²`.
fn integrate_over(poly: &MPoly, k: Symbol, upper: Symbol) -> MPoly {
    let mut out = MPoly::zero();
    for (a, c) in poly.split_by(k) {
        out += &c * &MPoly::var_pow(upper, a + 1).scale(&rat(1, 2 * a as i64 + 2));
    }
    out
}

/// Every assignment of `labels` to `blocks` numbered blocks.
fn assignments(labels: &[u16], blocks: usize) -> Vec<Vec<Vec<u16>>> {
    let mut out = Vec::new();
    let total = blocks.pow(labels.len() as u32);
    for code in 0..total {
        let mut parts = vec![Vec::new(); blocks];
        let mut c = code;
        for &l in labels {
            parts[c % blocks].push(l);
            c /= blocks;
        }
        out.push(parts);
    }
    out
}

/// `H_{|I|}(L_outer, K, L_I)`.
fn h_placed(h: &MPoly, outer: Symbol, inner: Symbol, defects: &[u16]) -> MPoly {
    h.relabel(|s| match s {
        Symbol::B(1) => outer,
        Symbol::B(2) => inner,
        Symbol::B(j) if j >= 3 && ((j - 3) as usize) < defects.len() => Symbol::B(defects[(j - 3) as usize]),
        other => other,
    })
}

fn half_tight_table(v: &VTable, p: u32) -> Result<Vec<MPoly>> {
    let mut h = vec![MPoly::zero()];
    let k = scratch(0);
    for q in 1..=p {
        let labels: Vec<u16> = (3..3 + q as u16).collect();
        let mut hq = v.get(0, 2 + q)?.clone();
        for parts in assignments(&labels, 2) {
            let (i1, i2) = (&parts[0], &parts[1]);
            if i1.is_empty() || i2.is_empty() {
                continue;
            }
            let a = h_placed(&h[i1.len()], Symbol::B(1), k, i1);
            let b = h_placed(&h[i2.len()], Symbol::B(2), k, i2);
            hq -= &integrate_over(&(&a * &b), k, Symbol::B(2));
        }
        h.push(hq);
    }
    Ok(h)
}

/// `Σ ∫ T_{g,n,|I_0|}(K, L_{I_0}) Π H_{|I_i|}(L_i, K_i, L_{I_i}) K_i dK_i` over assignments of
/// the `p` defects, restricted to `|I_0| < p` unless `full`.
fn glue(tables: &TightTables, p: u32, full: bool) -> MPoly {
    let n = tables.n as u16;
    let labels: Vec<u16> = (n + 1..=n + p as u16).collect();
    let mut total = MPoly::zero();
    for parts in assignments(&labels, n as usize + 1) {
        let i0 = &parts[0];
        if i0.len() == p as usize && !full {
            continue;
        }
        let mut term = tables.t[i0.len()].relabel(|s| match s {
            Symbol::B(i) if (1..=n).contains(&i) && !parts[i as usize].is_empty() => scratch(i),
            Symbol::B(j) if j > n && ((j - n - 1) as usize) < i0.len() => Symbol::B(i0[(j - n - 1) as usize]),
            other => other,
        });
        for i in 1..=n {
            let block = &parts[i as usize];
            if !block.is_empty() {
                term = &term * &h_placed(&tables.h[block.len()], Symbol::B(i), scratch(i), block);
            }
        }
        for i in 1..=n {
            if !parts[i as usize].is_empty() {
                term = integrate_over(&term, scratch(i), Symbol::B(i));
            }
        }
        total += term;
    }
    total
}

/// `T_{g,n,0..p}` and `H_0..H_p` from a volume table.
pub fn extract_tight(v: &VTable, g: u32, n: u32, p: u32) -> Result<TightTables> {
    check_stable(g, n)?;
    let h = half_tight_table(v, p)?;
    let mut tables = TightTables { g, n, h, t: vec![v.get(g, n)?.clone()] };
    for q in 1..=p {
        let rest = glue(&tables, q, false);
        tables.t.push(v.get(g, n + q)? - &rest);
    }
    Ok(tables)
}

/// `V_{g,n+p}` rebuilt from the tables, including the `|I_0| = p` term.
pub fn reglue(tables: &TightTables, p: u32) -> Result<MPoly> {
    if p as usize >= tables.t.len() {
        return Err(Error::MissingEntry(format!("T_{{{},{},{p}}}", tables.g, tables.n)));
    }
    Ok(glue(tables, p, true))
}

/// `H_p` rebuilt: `V_{0,2+p}` from `H_p` plus the two-cylinder gluings.
pub fn reglue_half_tight(tables: &TightTables, p: u32) -> Result<MPoly> {
    if p == 0 || p as usize >= tables.h.len() {
        return Err(Error::MissingEntry(format!("H_{p}")));
    }
    let k = scratch(0);
    let labels: Vec<u16> = (3..3 + p as u16).collect();
    let mut total = tables.h[p as usize].clone();
    for parts in assignments(&labels, 2) {
        if parts[0].is_empty() || parts[1].is_empty() {
            continue;
        }
        let a = h_placed(&tables.h[parts[0].len()], Symbol::B(1), k, &parts[0]);
        let b = h_placed(&tables.h[parts[1].len()], Symbol::B(2), k, &parts[1]);
        total += integrate_over(&(&a * &b), k, Symbol::B(2));
    }
    Ok(total)
}

/// Sets every defect length of `T_{g,n,p}` equal to `b_{n+1}`.
pub fn equal_defects(t: &MPoly, n: u32) -> MPoly {
    let first = n as u16 + 1;
    t.relabel(|s| match s {
        Symbol::B(j) if j > first && j < SCRATCH => Symbol::B(first),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(i: u16) -> MPoly {
        MPoly::var(Symbol::B(i))
    }

    #[test]
    fn base_cases() {
        let v = VTable::classical(1, 1, 2).unwrap();
        let t = extract_tight(&v, 1, 1, 2).unwrap();
        assert_eq!(t.h[1], MPoly::one());
        assert_eq!(t.t[0], wp_volume(1, 1).unwrap().poly);
    }

    #[test]
    fn h2_depends_on_the_difference() {
        // H_2 = V_{0,4} - 2 ∫_0^{L_2} K dK = ½(b1+b2+b3+b4) + 2π² - b2
        let v = VTable::classical(0, 3, 3).unwrap();
        let t = extract_tight(&v, 0, 3, 3).unwrap();
        let want = &(&(&(&b(1) - &b(2)) + &b(3)) + &b(4)).scale(&rat(1, 2)) + &MPoly::var(Symbol::Q).scale(&rat(2, 1));
        assert_eq!(t.h[2], want);
        for hp in &t.h[1..] {
            // invariant under b1 → b1 + s, b2 → b2 + s
            let shifted = hp.subst(&BTreeMap::from([
                (Symbol::B(1), &b(1) + &b(99)),
                (Symbol::B(2), &b(2) + &b(99)),
            ]));
            assert_eq!(&shifted, hp);
        }
    }

    #[test]
    fn degrees_and_symmetries() {
        let v = VTable::classical(0, 4, 2).unwrap();
        let t = extract_tight(&v, 0, 4, 2).unwrap();
        for (p, tp) in t.t.iter().enumerate() {
            let deg = tp.weighted_degree_range(|s| i64::from(s.is_boundary())).unwrap().1;
            assert_eq!(deg, 1 + p as i64);
            for i in 1..4u16 {
                assert_eq!(tp.swap(Symbol::B(i), Symbol::B(i + 1)), *tp);
            }
            if p == 2 {
                assert_eq!(tp.swap(Symbol::B(5), Symbol::B(6)), *tp);
            }
        }
        for (p, hp) in t.h.iter().enumerate().skip(1) {
            let deg = hp.weighted_degree_range(|s| i64::from(s.is_boundary())).map_or(0, |r| r.1);
            assert_eq!(deg, p as i64 - 1);
        }
    }

    #[test]
    fn t031_is_one_minus_defect_fold() {
        // V_{0,4} = T_{0,3,1} + Σ_i ∫_0^{L_i} H_1 K dK, so T_{0,3,1} = V_{0,4} - ½(b1+b2+b3)
        let v = VTable::classical(0, 3, 1).unwrap();
        let t = extract_tight(&v, 0, 3, 1).unwrap();
        let want = &b(4).scale(&rat(1, 2)) + &MPoly::var(Symbol::Q).scale(&rat(2, 1));
        assert_eq!(t.t[1], want);
    }

    #[test]
    fn reglue_reproduces_volumes() {
        for (g, n, p) in [(0, 3, 1), (0, 3, 2), (0, 4, 1), (1, 1, 1), (1, 1, 2)] {
            let v = VTable::classical(g, n, p).unwrap();
            let t = extract_tight(&v, g, n, p).unwrap();
            assert_eq!(reglue(&t, p).unwrap(), *v.get(g, n + p).unwrap(), "({g},{n},{p})");
            assert_eq!(reglue_half_tight(&t, p).unwrap(), *v.get(0, 2 + p).unwrap());
        }
    }

    #[test]
    fn missing_cells_are_reported() {
        let mut v = VTable::new();
        v.insert(1, 1, wp_volume(1, 1).unwrap().poly);
        assert!(matches!(extract_tight(&v, 1, 1, 1), Err(Error::MissingEntry(_))));
        assert!(extract_tight(&v, 0, 2, 0).is_err());
    }

    #[test]
    fn h_generating_function_matches_series() {
        use crate::geometry::formal::{formal_r, FormalInput, COUPLING};
        use crate::geometry::halftight::h_series;
        use crate::ring::rational::fact_rat;
        use crate::ring::TruncSeries;
        let order = 4u32;
        let v = VTable::classical(0, 3, order).unwrap();
        let t = extract_tight(&v, 0, 3, order).unwrap();
        let r = formal_r(&FormalInput::symbolic_atom(3), order as usize);
        let h = h_series(order as usize + 1);
        let composed: TruncSeries<MPoly> = r.compose_into(&h.coeffs().to_vec());
        for p in 1..=order {
            let at_k = t.h[p as usize].relabel(|s| match s {
                Symbol::B(j) if j >= 3 => Symbol::B(3),
                other => other,
            });
            let want = composed.coeff(p as usize).unwrap().scale(&fact_rat(p));
            assert_eq!(at_k, want, "p={p}");
        }
        assert_eq!(composed.var, COUPLING);
    }
}
