//! Overflow-safe hyperbolic functions and the ratios that appear in the
//! hyperbolic chord and the Hermite–Hadamard constants.
//!
//! `cosh`/`sinh` are evaluated as `e^{|x|}(1 ± e^{-2|x|})/2`, with `expm1` on
//! the minus branch so small arguments keep full relative precision. Past
//! `|x| = 700` the exponential is shifted by `ln 2` so the result stays finite
//! up to the true overflow point of `cosh` itself.

use std::f64::consts::LN_2;

const SHIFT_AT: f64 = 700.0;

#[inline]
fn half_exp(ax: f64) -> f64 {
    if ax <= SHIFT_AT {
        0.5 * ax.exp()
    } else {
        (ax - LN_2).exp()
    }
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    let ax = x.abs();
    half_exp(ax) * (1.0 + (-2.0 * ax).exp())
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    let ax = x.abs();
    let s = half_exp(ax) * -(-2.0 * ax).exp_m1();
    s.copysign(x)
}

#[inline]
pub fn sech(x: f64) -> f64 {
    let ax = x.abs();
    // 2e^{-|x|} / (1 + e^{-2|x|}) never overflows
    2.0 * (-ax).exp() / (1.0 + (-2.0 * ax).exp())
}

#[inline]
pub fn csch(x: f64) -> f64 {
    1.0 / sinh(x)
}

/// `sinh(u) / sinh(l)` for `0 <= u <= l`, `l > 0`, without forming either factor.
#[inline]
pub fn sinh_ratio(u: f64, l: f64) -> f64 {
    debug_assert!(l > 0.0);
    if u == 0.0 {
        return 0.0;
    }
    (u - l).exp() * ((-2.0 * u).exp_m1() / (-2.0 * l).exp_m1())
}

/// `cosh(u) / cosh(l)` for arbitrary finite `u`, `l`.
#[inline]
pub fn cosh_ratio(u: f64, l: f64) -> f64 {
    let (au, al) = (u.abs(), l.abs());
    (au - al).exp() * ((1.0 + (-2.0 * au).exp()) / (1.0 + (-2.0 * al).exp()))
}

/// `sinh(x)/x`, continuous at zero.
#[inline]
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        sinh(x) / x
    }
}

/// `tanh(x)/x`, continuous at zero.
#[inline]
pub fn tanhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 3.0
    } else {
        x.tanh() / x
    }
}
