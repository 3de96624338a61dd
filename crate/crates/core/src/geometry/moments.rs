//! The root `R`, moments `M_k`, times `t_k`, `η` and reverse moments `β_m`.

use std::f64::consts::PI;

use num_rational::BigRational;
use twofloat::TwoFloat;

use super::weight::Weight;
use crate::error::{Error, Result};
use crate::numeric::bessel::{bessel_i, bessel_j};
use crate::numeric::quad::try_integrate;
use crate::ring::rational::double_factorial;
use crate::ring::{Ring, TruncSeries};

pub const NEWTON_MAX_ITER: usize = 64;
pub const Z_TOLERANCE: f64 = 1e-12;
pub const ETA_REL_TOL: f64 = 1e-13;
pub const ETA_ABS_TOL: f64 = 1e-13;

/// Moment data over a coefficient ring: `f64` numerically, series in `w` formally.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentData<C> {
    pub r: C,
    pub m: Vec<C>,
    pub t: Vec<C>,
    pub beta: Vec<C>,
    /// `η(u) = Σ M_p u^{2p} / (2p+1)!!` truncated at `u^{2K}`.
    pub eta: TruncSeries<C>,
}

impl<C: Ring> MomentData<C> {
    /// Assembles `η` and `β` from `R`, `M_0..M_K` and the times.
    pub fn assemble(r: C, m: Vec<C>, t: Vec<C>) -> Result<Self> {
        let k = m.len().saturating_sub(1);
        let mut coeffs = vec![C::zero(); 2 * k + 1];
        for (p, mp) in m.iter().enumerate() {
            let df = BigRational::from_integer(double_factorial(2 * p as i64 + 1));
            coeffs[2 * p] = mp.scale(&df.recip());
        }
        let eta = TruncSeries::new("u", coeffs, 2 * k);
        let inv = eta.recip()?;
        let beta = (0..=k).map(|p| inv.coeff(2 * p)).collect::<Result<Vec<_>>>()?;
        Ok(Self { r, m, t, beta, eta })
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> MomentData<D> {
        MomentData {
            r: f(&self.r),
            m: self.m.iter().map(&f).collect(),
            t: self.t.iter().map(&f).collect(),
            beta: self.beta.iter().map(&f).collect(),
            eta: self.eta.map(&f),
        }
    }

    /// `Σ_{m ≤ p} M_m β_{p-m} / (2m+1)!! - δ_{p,0}`.
    pub fn convolution_defect(&self, p: usize) -> C {
        let mut acc = C::zero();
        for m in 0..=p {
            let df = BigRational::from_integer(double_factorial(2 * m as i64 + 1));
            acc = acc.add_ref(&self.m[m].mul_ref(&self.beta[p - m]).scale(&df.recip()));
        }
        if p == 0 {
            acc.sub_ref(&C::one())
        } else {
            acc
        }
    }
}

/// Newton diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootReport {
    pub r: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Root of `Z(r; μ]` on the branch through `R = μ(1) + O(μ²)`: the first sign
/// change of `Z` reached from `r = 0` while `Z' > 0`, refined by safeguarded Newton.
pub fn solve_r(weight: &Weight) -> Result<RootReport> {
    let f0 = weight.z(0.0)?;
    if f0.abs() <= Z_TOLERANCE {
        return Ok(RootReport { r: 0.0, residual: f0.abs(), iterations: 0 });
    }
    let dir = -f0.signum();
    let (mut a, mut fa) = (0.0, f0);
    let mut h = (f0.abs() / weight.z_derivative(0.0, 1)?.abs().max(1e-300)).max(1e-12);
    let mut best = (f0.abs(), 0.0);
    let mut bracket = None;
    for _ in 0..400 {
        let b = a + dir * h;
        let (fb, slope) = match (weight.z(b), weight.z_derivative(b, 1)) {
            (Ok(fb), Ok(sl)) => (fb, sl),
            _ => {
                h *= 0.25;
                if h < 1e-15 {
                    break;
                }
                continue;
            }
        };
        if fb.abs() < best.0 {
            best = (fb.abs(), b);
        }
        if fb.signum() != fa.signum() || fb == 0.0 {
            bracket = Some((a, fa, b));
            break;
        }
        if slope <= 0.0 {
            break;
        }
        a = b;
        fa = fb;
        h *= 1.5;
    }
    let Some((lo, flo, hi)) = bracket else {
        return Err(Error::NoRoot { residual: best.0, r: best.1 });
    };
    let (mut lo, mut hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let neg_at_lo = if lo == a { flo < 0.0 } else { flo > 0.0 };
    let mut r = 0.5 * (lo + hi);
    let mut f = weight.z(r)?;
    for it in 0..NEWTON_MAX_ITER {
        if f.abs() <= Z_TOLERANCE {
            return accept(weight, r, f, it);
        }
        if (f < 0.0) == neg_at_lo {
            lo = r;
        } else {
            hi = r;
        }
        let slope = weight.z_derivative(r, 1)?;
        let newton = r - f / slope;
        r = if slope != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        f = weight.z(r)?;
    }
    if f.abs() <= Z_TOLERANCE {
        return accept(weight, r, f, NEWTON_MAX_ITER);
    }
    Err(Error::NoConvergence { iterations: NEWTON_MAX_ITER, residual: f.abs(), r })
}

fn accept(weight: &Weight, r: f64, f: f64, iterations: usize) -> Result<RootReport> {
    let m0 = weight.z_derivative(r, 1)?;
    if m0 <= 0.0 {
        return Err(Error::Domain(format!("root r = {r} is off the physical branch (M0 = {m0})")));
    }
    Ok(RootReport { r, residual: f.abs(), iterations })
}

/// Numeric moment data to order `k`.
pub fn moments(weight: &Weight, k: usize) -> Result<(MomentData<f64>, RootReport)> {
    let (md, root) = moments_extended(weight, k)?;
    Ok((md.map(|x| x.hi() + x.lo()), root))
}

/// Numeric moment data with `η`, `β` carried in double-double: `β_m` grows like
/// `4^m`, so the reverse-moment identities need more than 53 bits to be checked.
pub fn moments_extended(weight: &Weight, k: usize) -> Result<(MomentData<TwoFloat>, RootReport)> {
    let root = solve_r(weight)?;
    let m = (0..=k)
        .map(|j| weight.z_derivative(root.r, j as u32 + 1).map(TwoFloat::from_f64))
        .collect::<Result<Vec<_>>>()?;
    let t = (0..=k).map(|j| TwoFloat::from_f64(weight.time(j as u32))).collect();
    Ok((MomentData::assemble(TwoFloat::from_f64(root.r), m, t)?, root))
}

/// `M_k` from the closed Bessel form, using real forms for `R < 0` and cone atoms.
pub fn moment_bessel(weight: &Weight, r: f64, k: u32) -> Result<f64> {
    if r == 0.0 {
        return weight.z_derivative(0.0, k + 1);
    }
    if weight.fzzt.is_some() {
        return Err(Error::Domain("the Bessel form covers atomic weights only".into()));
    }
    let s = (2.0 * r.abs()).sqrt();
    let free = if r > 0.0 {
        (-2.0f64.sqrt() * PI / r.sqrt()).powi(k as i32) * bessel_j(k, 2.0 * PI * s)
    } else {
        (-2.0f64.sqrt() * PI / r.abs().sqrt()).powi(k as i32) * bessel_i(k, 2.0 * PI * s)
    };
    let mut defects = 0.0;
    for a in &weight.atoms {
        let b = a.square_length();
        if b == 0.0 {
            continue;
        }
        let l = b.abs().sqrt();
        let y = l * s;
        // the term is (L²/2)^{k+1} times an entire function of L²R, so only signs change
        let sign = if b < 0.0 { (-1.0f64).powi(k as i32 + 1) } else { 1.0 };
        let bessel = if (b > 0.0) == (r > 0.0) { bessel_i(k + 1, y) } else { bessel_j(k + 1, y) };
        let v = sign * (l / s).powi(k as i32 + 1) * bessel;
        defects += a.weight * v;
    }
    Ok(free - defects)
}

/// `η(x) = ∫_0^1 Z'(R + x²(1-t²)/2) dt`, the Taylor series `Σ M_p x^{2p}/(2p+1)!!` resummed;
/// summing the series directly cancels badly once `x` is large.
pub fn eta_value(weight: &Weight, r: f64, x: f64) -> Result<f64> {
    let f = |t: f64| weight.z_derivative(r + 0.5 * x * x * (1.0 - t * t), 1);
    Ok(try_integrate(&f, 0.0, 1.0, ETA_REL_TOL, ETA_ABS_TOL)?.value)
}
