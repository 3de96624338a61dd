//! JT gravity partition functions with defects, by gluing tight trumpets onto tight volumes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::halftight::h_numeric;
use crate::geometry::moments::{moments, solve_r, MomentData};
use crate::geometry::weight::Weight;
use crate::kernel::tight_volume;
use crate::numeric::quad::{integrate, integrate_to_infinity, try_integrate_to_infinity};
use crate::ring::rational::to_f64;
use crate::ring::{MPoly, Symbol};
use crate::volume::is_stable;

pub const QUAD_REL_TOL: f64 = 1e-12;

/// A polynomial in `b_1..b_n` with real coefficients; key entry `i` is the power of `b_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SlotPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, f64>,
}

impl SlotPoly {
    pub fn new(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, k: Vec<u32>, c: f64) {
        assert_eq!(k.len(), self.n, "exponent vector length");
        *self.terms.entry(k).or_insert(0.0) += c;
    }

    /// Evaluates every non-boundary symbol through `value`; errors if one is unassigned
    /// or a boundary label exceeds `n`.
    pub fn from_mpoly(poly: &MPoly, n: usize, value: &dyn Fn(Symbol) -> Option<f64>) -> Result<Self> {
        let mut out = Self::new(n);
        for (mono, c) in poly.terms() {
            let mut k = vec![0u32; n];
            let mut coeff = to_f64(c);
            for &(s, e) in mono {
                match s {
                    Symbol::B(i) if (1..=n as u16).contains(&i) => k[i as usize - 1] = e,
                    _ => coeff *= value(s).ok_or_else(|| Error::UnknownSymbol(s.name()))?.powi(e as i32),
                }
            }
            out.add_term(k, coeff);
        }
        Ok(out)
    }

    /// Value at boundary lengths `l` (not squares).
    pub fn eval(&self, l: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c * k.iter().zip(l).map(|(&e, li)| (li * li).powi(e as i32)).product::<f64>())
            .sum()
    }
}

/// `e^{-b²/4β} / (2√(πβ))`.
pub fn trumpet(beta: f64, b: f64) -> f64 {
    (-b * b / (4.0 * beta)).exp() / (2.0 * (PI * beta).sqrt())
}

/// `e^{2Rβ}` times the trumpet.
pub fn tight_trumpet(beta: f64, k: f64, r: f64) -> f64 {
    (2.0 * r * beta).exp() * trumpet(beta, k)
}

/// `∫_0^∞ K^{2k+1} e^{-K²/4β} dK = ½ k! (4β)^{k+1}`.
pub fn gauss_moment(k: u32, beta: f64) -> f64 {
    let fact: f64 = (1..=k).map(f64::from).product();
    0.5 * fact * (4.0 * beta).powi(k as i32 + 1)
}

/// `∫ Π K_i dK_i Z^TT(β_i, K_i) p(K)` by the Gaussian moment map.
pub fn gauss_glue(p: &SlotPoly, betas: &[f64], r: f64) -> Result<f64> {
    if betas.len() != p.n {
        return Err(Error::Domain(format!("{} boundary lengths for {} slots", betas.len(), p.n)));
    }
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::Domain(format!("boundary length β must be positive, got {b}")));
    }
    let mut total = 0.0;
    for (k, c) in &p.terms {
        total += c * k.iter().zip(betas).map(|(&ki, &b)| gauss_moment(ki, b)).product::<f64>();
    }
    let norm: f64 = betas.iter().map(|b| (2.0 * r * b).exp() / (2.0 * (PI * b).sqrt())).product();
    Ok(total * norm)
}

/// Tight trumpet from its definition: the trumpet glued to a half-tight cylinder plus the
/// direct term, `Z^Tr(β,K) + ∫_K^∞ b db Z^Tr(β,b) H(b,K)`.
pub fn tight_trumpet_glued(beta: f64, k: f64, r: f64) -> Result<f64> {
    let f = |b: f64| -> Result<f64> { Ok(b * trumpet(beta, b) * h_numeric(b, k, r)?) };
    let q = try_integrate_to_infinity(&f, k, QUAD_REL_TOL, 0.0)?;
    Ok(trumpet(beta, k) + q.value)
}

/// `Z_{0,2}(β_1, β_2) = √(β_1β_2) e^{2(β_1+β_2)R} / (2π(β_1+β_2))`.
pub fn z02_closed(b1: f64, b2: f64, r: f64) -> f64 {
    (b1 * b2).sqrt() / (2.0 * PI * (b1 + b2)) * (2.0 * (b1 + b2) * r).exp()
}

/// `∫_0^∞ Z^TT(β_1, K) Z^TT(β_2, K) K dK` with each tight trumpet glued from its definition.
pub fn z02_quadrature(b1: f64, b2: f64, r: f64) -> Result<f64> {
    let f = |k: f64| -> Result<f64> { Ok(k * tight_trumpet_glued(b1, k, r)? * tight_trumpet_glued(b2, k, r)?) };
    Ok(try_integrate_to_infinity(&f, 0.0, 1e-10, 0.0)?.value)
}

/// `∫_0^∞ K Z^TT(β, K) p(K) dK` for a one-slot polynomial, by adaptive quadrature.
pub fn glue_quadrature(p: &SlotPoly, beta: f64, r: f64) -> Result<f64> {
    if p.n != 1 {
        return Err(Error::Domain("quadrature gluing is implemented for one slot".into()));
    }
    let f = |k: f64| k * tight_trumpet(beta, k, r) * p.eval(&[k]);
    Ok(integrate_to_infinity(&f, 0.0, QUAD_REL_TOL, 0.0)?.value)
}

/// `∫_0^{k_max} K^{2k+1} e^{-K²/4β} dK` by quadrature.
pub fn gauss_moment_quadrature(k: u32, beta: f64) -> Result<f64> {
    let f = |x: f64| x.powi(2 * k as i32 + 1) * (-x * x / (4.0 * beta)).exp();
    let top = 40.0 * beta.sqrt() + 10.0 * (k as f64 + 1.0) * beta.sqrt();
    Ok(integrate(&f, 0.0, top, QUAD_REL_TOL, 0.0)?.value)
}

#[derive(Clone, Debug)]
pub struct JtRequest {
    pub g: u32,
    pub betas: Vec<f64>,
    pub weight: Weight,
    /// Only enters the reported prefactor `e^{-S_0(2g+n-2)}`.
    pub s0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JtDiagnostics {
    pub z_residual: f64,
    pub newton_iterations: usize,
    /// `e^{-S_0(2g+n-2)}`, not multiplied into `value`.
    pub prefactor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JtResult {
    pub value: f64,
    pub prefactor_exponent: u32,
    #[serde(rename = "R")]
    pub r: f64,
    pub diagnostics: JtDiagnostics,
}

/// `T_{g,n}(K; μ]` as a real polynomial in `K_i²`.
pub fn tight_slots(g: u32, n: u32, md: &MomentData<f64>) -> Result<SlotPoly> {
    let t = tight_volume(g, n)?;
    SlotPoly::from_mpoly(&t.poly, n as usize, &|s| match s {
        Symbol::Q => Some(PI * PI),
        Symbol::Beta(m) => md.beta.get(m as usize).copied(),
        _ => None,
    })
}

/// `Z_{g,n}(β)` for stable `(g, n)` or `(0, 2)`.
pub fn jt_partition(req: &JtRequest) -> Result<JtResult> {
    let n = req.betas.len() as u32;
    let g = req.g;
    let exponent = (2 * g + n).checked_sub(2).filter(|_| is_stable(g, n) || (g, n) == (0, 2));
    let Some(exponent) = exponent else {
        return Err(Error::Unstable { g, n });
    };
    if let Some(b) = req.betas.iter().find(|b| !(**b > 0.0)) {
        return Err(Error::Domain(format!("boundary length β must be positive, got {b}")));
    }
    let (value, root) = if (g, n) == (0, 2) {
        let root = solve_r(&req.weight)?;
        (z02_closed(req.betas[0], req.betas[1], root.r), root)
    } else {
        let (md, root) = moments(&req.weight, (3 * g + n - 3) as usize)?;
        (gauss_glue(&tight_slots(g, n, &md)?, &req.betas, root.r)?, root)
    };
    Ok(JtResult {
        value,
        prefactor_exponent: exponent,
        r: root.r,
        diagnostics: JtDiagnostics {
            z_residual: root.residual,
            newton_iterations: root.iterations,
            prefactor: (-req.s0 * exponent as f64).exp(),
        },
    })
}

/// [`jt_partition`] for a weight carrying a brane, checking `z > √(2R)`.
pub fn fzzt_partition(req: &JtRequest) -> Result<JtResult> {
    let brane = req.weight.fzzt.ok_or_else(|| Error::Domain("weight has no FZZT brane".into()))?;
    let r = solve_r(&req.weight)?.r;
    if r > 0.0 && brane.z <= (2.0 * r).sqrt() {
        return Err(Error::Domain(format!("brane needs z > √(2R) (z = {}, R = {r})", brane.z)));
    }
    jt_partition(req)
}
