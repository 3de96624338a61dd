//! Free energies `F_g[μ]`: generating functions of the volumes `V_{g,n}` integrated against `μ`.

use std::f64::consts::PI;

use super::moments::{moments, solve_r};
use super::weight::Weight;
use crate::error::{Error, Result};
use crate::nrec::p_poly;
use crate::numeric::quad::try_integrate;
use crate::ring::Symbol;

pub const QUAD_REL_TOL: f64 = 1e-10;

/// `F_g[μ]`: `½∫_0^R Z²` for `g = 0`, `-log(M_0)/24` for `g = 1`, and
/// `M_0^{2-2g} P_{g,0}(M_k/M_0)` for `g ≥ 2`.
pub fn free_energy(g: u32, weight: &Weight) -> Result<f64> {
    match g {
        0 => {
            let r = solve_r(weight)?.r;
            let q = try_integrate(&|x| Ok(weight.z(x)?.powi(2)), 0.0, r, QUAD_REL_TOL, 0.0)?;
            Ok(0.5 * q.value)
        }
        1 => {
            let (md, _) = moments(weight, 0)?;
            Ok(-md.m[0].ln() / 24.0)
        }
        _ => {
            let top = 3 * g as usize - 3;
            let (md, _) = moments(weight, top)?;
            let m0 = md.m[0];
            let p = p_poly(g, 0)?;
            let value = p.poly.eval_f64(&|s| match s {
                Symbol::Q => Some(PI * PI),
                Symbol::SmallM(k) => md.m.get(k as usize).map(|mk| mk / m0),
                _ => None,
            });
            let value = value.ok_or_else(|| Error::UnknownSymbol(format!("{}", p.poly)))?;
            Ok(value * m0.powi(2 - 2 * g as i32))
        }
    }
}
