//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cell::RefCell;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integral estimate with its error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let mut parts = vec![(a, b, gk15(f, a, b))];
    for _ in 0..4000 {
        let value: f64 = parts.iter().map(|p| p.2 .0).sum();
        let error: f64 = parts.iter().map(|p| p.2 .1).sum();
        if !value.is_finite() {
            return Err(Error::Quadrature { estimate: f64::NAN });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature { value, error });
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .expect("nonempty");
        let (lo, hi, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Err(Error::Quadrature { estimate: error });
        }
        parts.push((lo, mid, gk15(f, lo, mid)));
        parts.push((mid, hi, gk15(f, mid, hi)));
    }
    let error: f64 = parts.iter().map(|p| p.2 .1).sum();
    Err(Error::Quadrature { estimate: error })
}

/// `∫_a^∞ f` through `x = a + t/(1-t)`.
pub fn integrate_to_infinity(f: &dyn Fn(f64) -> f64, a: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    let g = |t: f64| {
        let s = 1.0 - t;
        if s <= 0.0 {
            return 0.0;
        }
        let v = f(a + t / s) / (s * s);
        if v.is_finite() { v } else { 0.0 }
    };
    integrate(&g, 0.0, 1.0, rel_tol, abs_tol)
}

fn capture(f: &dyn Fn(f64) -> Result<f64>, run: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<Quadrature>) -> Result<Quadrature> {
    let failure = RefCell::new(None);
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let q = run(&g);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => q,
    }
}

/// [`integrate`] for a fallible integrand; the first failure is returned.
pub fn try_integrate(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    capture(f, |g| integrate(g, a, b, rel_tol, abs_tol))
}

/// [`integrate_to_infinity`] for a fallible integrand; the first failure is returned.
pub fn try_integrate_to_infinity(f: &dyn Fn(f64) -> Result<f64>, a: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    capture(f, |g| integrate_to_infinity(g, a, rel_tol, abs_tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(&|x| 3.0 * x * x - x, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((q.value - 6.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_and_reversed() {
        let q = integrate(&|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-12, 1e-15).unwrap();
        assert!(q.value.abs() < 1e-12);
        let r = integrate(&|x: f64| x.exp(), 1.0, 0.0, 1e-13, 0.0).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn half_line() {
        // ∫_0^∞ x e^{-x²/4} dx = 2
        let q = integrate_to_infinity(&|x: f64| x * (-x * x / 4.0).exp(), 0.0, 1e-12, 0.0).unwrap();
        assert!((q.value - 2.0).abs() < 1e-11);
        // ∫_0^∞ e^{-x}/(1+x) = e·E1(1)
        let want = 0.596347362323194074341078499369279;
        let q = integrate_to_infinity(&|x: f64| (-x).exp() / (1.0 + x), 0.0, 1e-12, 0.0).unwrap();
        assert!((q.value - want).abs() < 1e-12);
    }

    #[test]
    fn failures_propagate() {
        let f = |x: f64| if x > 0.5 { Err(Error::Domain("x".into())) } else { Ok(x) };
        assert!(matches!(try_integrate(&f, 0.0, 1.0, 1e-10, 0.0), Err(Error::Domain(_))));
        assert!(matches!(try_integrate_to_infinity(&f, 0.0, 1e-10, 0.0), Err(Error::Domain(_))));
        assert!((try_integrate(&|x| Ok(x), 0.0, 1.0, 1e-12, 0.0).unwrap().value - 0.5).abs() < 1e-15);
    }
}
