//! Weight constants `∫ cosh(p(x−m))·K(x)·v(x) dx` and their sinh analogues.

use crate::error::Result;
use crate::fracops::{endpoint_sum, Family, FracParams};
use crate::funcspec::Interval;
use crate::hyperbolic::{cosh, sinh, sinh_ratio};
use crate::quadrature::{integrate_fallible, QuadConfig};

use super::WeightSpec;

/// The measure a bound integrates against: plain `dx` or a fractional kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Plain,
    Frac(FracParams),
}

impl Kernel {
    pub fn rl(alpha: f64) -> Result<Self> {
        Ok(Kernel::Frac(FracParams::new(alpha, Family::Rl)?))
    }

    pub fn exp(alpha: f64) -> Result<Self> {
        Ok(Kernel::Frac(FracParams::new(alpha, Family::Exp)?))
    }

    /// `∫ₐᵇ g(x)·K(x) dx`. For a fractional kernel this is
    /// `J^α_{a+} g(b) + J^α_{b−} g(a)`.
    pub fn integrate<G>(&self, g: G, iv: Interval, cfg: &QuadConfig) -> Result<f64>
    where
        G: Fn(f64) -> Result<f64> + Send + Sync,
    {
        match self {
            Kernel::Plain => Ok(integrate_fallible(&g, iv, cfg)?.value),
            Kernel::Frac(params) => endpoint_sum(&g, iv, *params, cfg),
        }
    }
}

/// `∫ cosh(p(x−m))·K(x)·v(x) dx`.
pub fn const_c(v: &WeightSpec, iv: Interval, kernel: Kernel, p: f64, cfg: &QuadConfig) -> Result<f64> {
    let m = iv.mid();
    let v = v.func();
    kernel.integrate(|x| Ok(cosh(p * (x - m)) * v.eval(x)?), iv, cfg)
}

/// `∫ sinh(p(x−m))·K(x)·v(x) dx`.
pub fn const_s(v: &WeightSpec, iv: Interval, kernel: Kernel, p: f64, cfg: &QuadConfig) -> Result<f64> {
    let m = iv.mid();
    let v = v.func();
    kernel.integrate(|x| Ok(sinh(p * (x - m)) * v.eval(x)?), iv, cfg)
}

/// `csch(pL/2)·∫ sinh(p(x−m))·K(x)·v(x) dx`, integrated as the bounded ratio
/// `sinh(p(x−m))/sinh(pL/2)` so that `p → 0` has the finite limit
/// `∫ (x−m)/(L/2)·K·v`.
pub fn scaled_sinh_term(v: &WeightSpec, iv: Interval, kernel: Kernel, p: f64, cfg: &QuadConfig) -> Result<f64> {
    let (m, half) = (iv.mid(), 0.5 * iv.len());
    let v = v.func();
    kernel.integrate(|x| Ok(sinh_fraction(p, x - m, half) * v.eval(x)?), iv, cfg)
}

/// `sinh(p·t)/sinh(p·half)` for `|t| <= half`.
pub(crate) fn sinh_fraction(p: f64, t: f64, half: f64) -> f64 {
    if p == 0.0 {
        return t / half;
    }
    let q = p.abs();
    let r = sinh_ratio((q * t.abs()).min(q * half), q * half);
    r.copysign(t)
}

fn checked(v: &WeightSpec, iv: Interval) -> Result<()> {
    v.validate(iv)
}

/// `𝒞¹_α(v)`: Riemann–Liouville kernel. `v ≡ 1` gives the constant of the
/// unweighted fractional bound.
pub fn const_c1(v: &WeightSpec, iv: Interval, alpha: f64, p: f64) -> Result<f64> {
    checked(v, iv)?;
    const_c(v, iv, Kernel::rl(alpha)?, p, &QuadConfig::tight())
}

/// `𝒞²_α(v)`: exponential kernel, `0 < α < 1`.
pub fn const_c2(v: &WeightSpec, iv: Interval, alpha: f64, p: f64) -> Result<f64> {
    checked(v, iv)?;
    const_c(v, iv, Kernel::exp(alpha)?, p, &QuadConfig::tight())
}

/// `𝒮¹_α(v)`: Riemann–Liouville kernel with sinh in place of cosh.
pub fn const_s1(v: &WeightSpec, iv: Interval, alpha: f64, p: f64) -> Result<f64> {
    checked(v, iv)?;
    const_s(v, iv, Kernel::rl(alpha)?, p, &QuadConfig::tight())
}

/// `𝒮²_α(v)`: exponential kernel with sinh in place of cosh.
pub fn const_s2(v: &WeightSpec, iv: Interval, alpha: f64, p: f64) -> Result<f64> {
    checked(v, iv)?;
    const_s(v, iv, Kernel::exp(alpha)?, p, &QuadConfig::tight())
}
