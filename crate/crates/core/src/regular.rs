//! Laplace transforms `𝒲_{g,n}(z)` of the regular volume generating functions
//! `δ^n F_g / δμ(L_1)..δμ(L_n)`, evaluated numerically for a weight.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::moments::{eta_value, moments, solve_r, MomentData};
use crate::geometry::weight::Weight;
use crate::numeric::quad::try_integrate;
use crate::residue::{omega, CorrelatorLaurent};
use crate::ring::Symbol;

pub const QUAD_REL_TOL: f64 = 1e-12;

/// `ω_{g,n}(x)` with the reverse moments of `md`.
pub fn omega_value(w: &CorrelatorLaurent, md: &MomentData<f64>, x: &[f64]) -> Result<f64> {
    if x.len() != w.n as usize {
        return Err(Error::Domain(format!("ω_{{{},{}}} takes {} arguments, got {}", w.g, w.n, w.n, x.len())));
    }
    let mut total = 0.0;
    for (k, c) in &w.coeffs {
        let coeff = c
            .eval_f64(&|s| match s {
                Symbol::Q => Some(PI * PI),
                Symbol::Beta(m) => md.beta.get(m as usize).copied(),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownSymbol(format!("{c}")))?;
        let z: f64 = k.iter().zip(x).map(|(&ki, &xi)| xi.powi(-2 * ki as i32 - 2)).product();
        total += coeff * z;
    }
    Ok(total)
}

/// `x = √(z² - 2R)`, requiring `z > 0` and `z² > 2R`.
fn shifted(z: f64, r: f64) -> Result<f64> {
    let d = z * z - 2.0 * r;
    if !(z > 0.0 && d > 0.0) {
        return Err(Error::Domain(format!("need z > 0 and z^2 > 2R (z = {z}, R = {r})")));
    }
    Ok(d.sqrt())
}

fn quadrature(f: &dyn Fn(f64) -> Result<f64>, r: f64) -> Result<f64> {
    Ok(try_integrate(f, 0.0, r, QUAD_REL_TOL, 0.0)?.value)
}

/// Disk function `-∫_0^R z/(z²-2r)^{3/2} Z(r) dr`.
pub fn disk_quadrature(weight: &Weight, z: f64) -> Result<f64> {
    let r = solve_r(weight)?.r;
    shifted(z, r)?;
    shifted(z, 0.0)?;
    let f = |s: f64| Ok(-z * (z * z - 2.0 * s).powf(-1.5) * weight.z(s)?);
    quadrature(&f, r)
}

/// Disk function from `η`: `-z x η(x) + z sin(2πz)/(2π) - ∫dμ cosh(Lz)` with `x = √(z²-2R)`.
pub fn disk_from_eta(weight: &Weight, z: f64) -> Result<f64> {
    let r = solve_r(weight)?.r;
    let x = shifted(z, r)?;
    Ok(-z * x * eta_value(weight, r, x)? + z * (2.0 * PI * z).sin() / (2.0 * PI) - weight.cosh_transform(z)?)
}

/// Cylinder function `(z_1 z_2/(x_1 x_2)) (x_1 - x_2)^{-2} - (z_1 - z_2)^{-2}`.
pub fn cylinder(weight: &Weight, z1: f64, z2: f64) -> Result<f64> {
    if z1 == z2 {
        return Err(Error::Domain("cylinder function needs distinct arguments".into()));
    }
    let r = solve_r(weight)?.r;
    let (x1, x2) = (shifted(z1, r)?, shifted(z2, r)?);
    Ok(z1 * z2 / (x1 * x2) / (x1 - x2).powi(2) - 1.0 / (z1 - z2).powi(2))
}

/// Cylinder function as `∫_0^R z_1 z_2 (z_1²-2r)^{-3/2} (z_2²-2r)^{-3/2} dr`.
pub fn cylinder_quadrature(weight: &Weight, z1: f64, z2: f64) -> Result<f64> {
    let r = solve_r(weight)?.r;
    for z in [z1, z2] {
        shifted(z, r)?;
        shifted(z, 0.0)?;
    }
    let f = |s: f64| Ok(z1 * z2 * ((z1 * z1 - 2.0 * s) * (z2 * z2 - 2.0 * s)).powf(-1.5));
    quadrature(&f, r)
}

/// `𝒲_{g,n}(z)`: quadrature for the disk, closed form for the cylinder, and
/// `ω_{g,n}(x) Π z_i/x_i` otherwise.
pub fn regular_correlator(g: u32, n: u32, weight: &Weight, z: &[f64]) -> Result<f64> {
    if z.len() != n as usize {
        return Err(Error::Domain(format!("expected {n} arguments, got {}", z.len())));
    }
    match (g, n) {
        (0, 1) => disk_quadrature(weight, z[0]),
        (0, 2) => cylinder(weight, z[0], z[1]),
        _ => {
            let w = omega(g, n)?;
            let (md, _) = moments(weight, (3 * g + n - 3) as usize)?;
            let x = z.iter().map(|&zi| shifted(zi, md.r)).collect::<Result<Vec<_>>>()?;
            let jac: f64 = z.iter().zip(&x).map(|(zi, xi)| zi / xi).product();
            Ok(omega_value(&w, &md, &x)? * jac)
        }
    }
}
