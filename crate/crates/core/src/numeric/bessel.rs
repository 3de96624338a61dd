//! Bessel functions `J_n` and `I_n` of integer order for real arguments.
//!
//! Ascending series for moderate arguments and Hankel-type asymptotic expansions
//! beyond `|x| = 30`. The alternating `J` series is only used up to `|x| = 12`;
//! between 12 and 30 `J_n` comes from Miller's backward recurrence.

use std::f64::consts::PI;

const SWITCH: f64 = 30.0;
const J_SERIES_MAX: f64 = 12.0;

fn series(n: u32, x: f64, sign: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = half * half;
    let mut sum = term;
    for k in 1..500u32 {
        term *= sign * q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `J_n(x)`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    if x <= J_SERIES_MAX {
        return series(n, x, -1.0);
    }
    if x <= SWITCH {
        return backward_j(n, x);
    }
    let mu = 4.0 * (n as f64).powi(2);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60u32 {
        let kk = (2 * k - 1) as f64;
        term *= (mu - kk * kk) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (n as f64) * PI / 2.0 - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn backward_j(n: u32, x: f64) -> f64 {
    let top = 2 * ((n.max(x as u32) + 20 + (40.0 * n.max(x as u32) as f64).sqrt() as u32) / 2);
    let (mut above, mut cur) = (0.0f64, 1.0f64);
    let mut norm = 0.0;
    let mut want = 0.0;
    for k in (1..=top).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            above *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
        if k - 1 == n {
            want = cur;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
    }
    if n == top {
        want = above;
    }
    norm += cur;
    want / norm
}

/// `I_n(x)`.
pub fn bessel_i(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_i(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    if x <= SWITCH {
        return series(n, x, 1.0);
    }
    let mu = 4.0 * (n as f64).powi(2);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60u32 {
        let kk = (2 * k - 1) as f64;
        term *= -(mu - kk * kk) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

/// `Σ_j x^j / (j! (j+ν)!)`, the entire function behind `I_ν` and `J_ν`:
/// `x^{-ν/2} I_ν(2√x)` for `x > 0` and `|x|^{-ν/2} J_ν(2√|x|)` for `x < 0`.
pub fn entire(nu: u32, x: f64) -> f64 {
    entire_from(nu, x, 0)
}

/// `entire(ν, x) - 1/ν!`, without the cancellation for small `x`.
pub fn entire_tail(nu: u32, x: f64) -> f64 {
    entire_from(nu, x, 1)
}

fn entire_from(nu: u32, x: f64, start: u32) -> f64 {
    let series_ok = x >= 0.0 || 2.0 * (-x).sqrt() <= J_SERIES_MAX;
    if !series_ok {
        let y = 2.0 * (-x).sqrt();
        let full = bessel_j(nu, y) / (-x).powf(nu as f64 / 2.0);
        return if start == 0 { full } else { full - inv_factorial(nu) };
    }
    let mut term = inv_factorial(nu);
    for j in 1..=start {
        term *= x / (j as f64 * (j + nu) as f64);
    }
    let mut sum = 0.0;
    for j in start + 1..100_000 {
        sum += term;
        let next = term * x / (j as f64 * (j + nu) as f64);
        if next.abs() <= 1e-17 * sum.abs() || next == 0.0 {
            break;
        }
        term = next;
    }
    sum
}

fn inv_factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc / k as f64)
}
