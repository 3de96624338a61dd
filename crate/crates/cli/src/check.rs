//! Identity suites behind `wpvol check`.

use clap::ValueEnum;
use serde::Serialize;
use wpvol::geometry::decomposition::{equal_defects, extract_tight, reglue, VTable};
use wpvol::geometry::formal::{formal_moments, tight_series, FormalInput};
use wpvol::geometry::halftight::h_series;
use wpvol::geometry::moments::{moments, solve_r};
use wpvol::geometry::weight::{Atom, Weight};
use wpvol::jt::{gauss_glue, gauss_moment, gauss_moment_quadrature, glue_quadrature, tight_slots, z02_closed, z02_quadrature};
use wpvol::kernel::tight_volume;
use wpvol::nrec::{p_poly, string_dilaton_check};
use wpvol::residue::{omega, omega_from_t, t_from_omega};
use wpvol::ring::rational::{fact_rat, rat};
use wpvol::ring::{MPoly, Ring, Symbol, TruncSeries};
use wpvol::volume::{is_stable, Basis};

pub const JT_REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ring,
    Paths,
    StringDilaton,
    Decomposition,
    Jt,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub max_complexity: u32,
    pub passed: bool,
    pub checks: Vec<Record>,
}

struct Sink {
    suite: &'static str,
    out: Vec<Record>,
}

impl Sink {
    fn new(suite: &'static str) -> Self {
        Self { suite, out: Vec::new() }
    }

    fn push(&mut self, name: String, result: Result<String, String>) {
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.out.push(Record { suite: self.suite, name, passed, detail });
    }

    fn exact(&mut self, name: String, ok: wpvol::Result<bool>) {
        let r = match ok {
            Ok(true) => Ok("exact".into()),
            Ok(false) => Err("mismatch".into()),
            Err(e) => Err(e.to_string()),
        };
        self.push(name, r);
    }

    fn close(&mut self, name: String, got: wpvol::Result<(f64, f64)>, tol: f64) {
        let r = match got {
            Ok((a, b)) => {
                let e = ((a - b) / b).abs();
                if e <= tol {
                    Ok(format!("rel {e:.1e}"))
                } else {
                    Err(format!("{a} vs {b}: rel {e:.1e} > {tol:.0e}"))
                }
            }
            Err(e) => Err(e.to_string()),
        };
        self.push(name, r);
    }
}

/// Stable `(g, n)` with `n ≥ 1` and `2g - 2 + n ≤ c`.
pub fn cells(c: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=(c + 2) / 2 {
        for n in 1..=(c + 2).saturating_sub(2 * g) {
            if is_stable(g, n) {
                out.push((g, n));
            }
        }
    }
    out
}

fn ring_suite() -> Vec<Record> {
    let mut s = Sink::new("ring");
    let samples: Vec<MPoly> = [(0u32, 4u32), (0, 5), (1, 2), (2, 1)]
        .iter()
        .filter_map(|&(g, n)| p_poly(g, n).ok().map(|p| p.poly.clone()))
        .collect();
    for (i, a) in samples.iter().enumerate() {
        let b = &samples[(i + 1) % samples.len()];
        let c = &samples[(i + 2) % samples.len()];
        s.exact(format!("commutativity #{i}"), Ok(a * b == b * a && a + b == b + a));
        s.exact(format!("associativity #{i}"), Ok(&(a * b) * c == a * &(b * c)));
        s.exact(format!("distributivity #{i}"), Ok(a * &(b + c) == &(a * b) + &(a * c)));
        s.exact(format!("even integration inverts #{i}"), Ok(a.integrate_even(1).derive_even(1) == *a));
    }
    let series = TruncSeries::new("x", (1..=8).map(|k| rat(k, k + 1)).collect(), 7);
    let inv = series.recip();
    s.exact(
        "series reciprocal".into(),
        inv.map(|inv| {
            let prod = series.mul_ref(&inv);
            (0..=7).all(|k| prod.coeff(k).is_ok_and(|c| c == if k == 0 { rat(1, 1) } else { rat(0, 1) }))
        }),
    );
    for (g, n) in [(1u32, 2u32), (0, 5)] {
        let r = tight_volume(g, n).map(|t| t_from_omega(&omega_from_t(&t), Basis::Beta) == *t);
        s.exact(format!("Laplace round trip ({g},{n})"), r);
    }
    s.out
}

fn paths_suite(c: u32) -> Vec<Record> {
    let mut s = Sink::new("paths");
    for (g, n) in cells(c) {
        let r = (|| {
            let kernel = tight_volume(g, n)?;
            let residue = t_from_omega(&*omega(g, n)?, Basis::Beta);
            let nrec = p_poly(g, n)?;
            Ok(kernel.poly == residue.poly
                && kernel.to_basis(Basis::Moments)?.poly == nrec.poly
                && residue.raw_moment_form()? == nrec.raw_moment_form()?)
        })();
        s.exact(format!("kernel = residue = n-recursion ({g},{n})"), r);
    }
    s.out
}

fn string_dilaton_suite(c: u32) -> Vec<Record> {
    let mut s = Sink::new("string-dilaton");
    for (g, n) in cells(c) {
        if !((g == 0 && n >= 4) || (g == 1 && n >= 2) || g >= 2) {
            continue;
        }
        let r = match string_dilaton_check(g, n) {
            Ok(rep) if rep.string_holds && rep.dilaton_holds => Ok("exact".into()),
            Ok(rep) => Err(rep.first_failure.unwrap_or_default()),
            Err(e) => Err(e.to_string()),
        };
        s.push(format!("string and dilaton ({g},{n})"), r);
    }
    s.out
}

fn decomposition_suite() -> Vec<Record> {
    let mut s = Sink::new("decomposition");
    for (g, n, p) in [(0u32, 3u32, 1u32), (0, 3, 2), (0, 4, 1), (1, 1, 1), (1, 1, 2)] {
        let r = (|| {
            let tables = extract_tight(&VTable::classical(g, n, p)?, g, n, p)?;
            Ok(tables.h[1] == MPoly::one() && reglue(&tables, p)? == wpvol::kernel::wp_volume(g, n + p)?.poly)
        })();
        s.exact(format!("reglue T_{{{g},{n},{p}}} to V_{{{g},{}}}", n + p), r);
    }
    let h = h_series(3);
    let d = &MPoly::var(Symbol::B(1)) - &MPoly::var(Symbol::B(2));
    let want = [MPoly::zero(), MPoly::one(), d.scale(&rat(1, 4)), d.pow(2).scale(&rat(1, 48))];
    s.exact("half-tight series leading terms".into(), Ok(want.iter().enumerate().all(|(k, w)| h.coeff(k).as_ref() == Ok(w))));
    for (g, n) in [(0u32, 3u32), (1, 1), (0, 4)] {
        let r = (|| {
            let k = (3 * g + n - 3) as usize;
            let md = formal_moments(&FormalInput::symbolic_atom(n as u16 + 1), 3, k)?;
            let series = tight_series(&*tight_volume(g, n)?, &md)?;
            let tables = extract_tight(&VTable::classical(g, n, 3)?, g, n, 3)?;
            for p in 0..=3u32 {
                if series.coeff(p as usize)?.scale(&fact_rat(p)) != equal_defects(&tables.t[p as usize], n) {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        s.exact(format!("coupling expansion of T_{{{g},{n}}} to order 3"), r);
    }
    s.out
}

fn jt_suite() -> Vec<Record> {
    let mut s = Sink::new("jt");
    let betas = [0.5, 1.0, 2.0];
    for k in 0..=6 {
        s.close(format!("moment map k={k}"), gauss_moment_quadrature(k, 1.0).map(|q| (gauss_moment(k, 1.0), q)), 1e-10);
    }
    for (label, weight) in [("no defect", Weight::zero()), ("geodesic L=1 w=0.02", Weight::atoms(vec![Atom::geodesic(1.0, 0.02)]))] {
        let r = match solve_r(&weight) {
            Ok(root) => root.r,
            Err(e) => {
                s.push(format!("root ({label})"), Err(e.to_string()));
                continue;
            }
        };
        for &b in &betas {
            s.close(format!("Z02({b},1) closed vs glued, {label}"), z02_quadrature(b, 1.0, r).map(|q| (z02_closed(b, 1.0, r), q)), JT_REL_TOL);
        }
        let slots = moments(&weight, 1).and_then(|(md, _)| tight_slots(1, 1, &md));
        for &b in &betas {
            let got = slots.clone().and_then(|p| Ok((gauss_glue(&p, &[b], r)?, glue_quadrature(&p, b, r)?)));
            s.close(format!("Z11({b}) moment map vs quadrature, {label}"), got, JT_REL_TOL);
        }
    }
    s.out
}

pub fn run(suite: Suite, max_complexity: u32) -> Report {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Ring {
        checks.extend(ring_suite());
    }
    if all || suite == Suite::Paths {
        checks.extend(paths_suite(max_complexity));
    }
    if all || suite == Suite::StringDilaton {
        checks.extend(string_dilaton_suite(max_complexity));
    }
    if all || suite == Suite::Decomposition {
        checks.extend(decomposition_suite());
    }
    if all || suite == Suite::Jt {
        checks.extend(jt_suite());
    }
    let passed = checks.iter().all(|c| c.passed);
    Report { max_complexity, passed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_respect_the_bound() {
        let c = cells(2);
        assert_eq!(c, vec![(0, 3), (0, 4), (1, 1), (1, 2)]);
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Ring, Suite::Paths, Suite::StringDilaton] {
            let r = run(suite, 3);
            assert!(r.passed, "{:?}", r.checks.iter().find(|c| !c.passed));
            assert!(!r.checks.is_empty());
        }
    }
}
