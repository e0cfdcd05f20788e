//! Left and right fractional integrals of Riemann–Liouville type and with the
//! exponential kernel `exp(−((1−α)/α)·distance)/α`.
//!
//! `I^α_{a+} f(t)` integrates over `[a, t]` with the kernel singular at `t`;
//! `I^α_{b−} f(t)` integrates over `[t, b]` with the kernel singular at `t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{Interval, RealFn};
use crate::quadrature::{integrate_fallible, integrate_singular, Endpoint, QuadConfig, QuadResult};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Riemann–Liouville: kernel `(t−s)^{α−1}/Γ(α)`, any `α > 0`.
    Rl,
    /// Exponential kernel, `0 < α < 1`.
    Exp,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Rl => "rl",
            Family::Exp => "exp",
        })
    }
}

/// Left (`a+`) or right (`b−`) operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Fractional order together with the operator family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    alpha: f64,
    family: Family,
}

impl FracParams {
    pub fn new(alpha: f64, family: Family) -> Result<Self> {
        let ok = match family {
            Family::Rl => alpha > 0.0 && alpha.is_finite(),
            Family::Exp => alpha > 0.0 && alpha < 1.0,
        };
        if !ok {
            return Err(Error::invalid(match family {
                Family::Rl => format!("alpha must be positive for family rl, got {alpha}"),
                Family::Exp => format!("alpha must lie in (0, 1) for family exp, got {alpha}"),
            }));
        }
        Ok(FracParams { alpha, family })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Decay rate `(1−α)/α` of the exponential kernel.
    pub fn decay(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }
}

/// Evaluates the fractional integral of `f` at `t`, returning the quadrature
/// diagnostics alongside the value.
pub fn fractional_integral<F: RealFn + ?Sized>(
    f: &F,
    iv: Interval,
    params: FracParams,
    side: Side,
    t: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let (a, b) = (iv.a(), iv.b());
    let alpha = params.alpha;
    match params.family {
        Family::Rl => {
            let span = match side {
                Side::Left if t > a && t <= b => Interval::new(a, t)?,
                Side::Right if t >= a && t < b => Interval::new(t, b)?,
                Side::Left => return Err(Error::invalid(format!("t = {t} outside (a, b] = ({a}, {b}]"))),
                Side::Right => return Err(Error::invalid(format!("t = {t} outside [a, b) = [{a}, {b})"))),
            };
            // the kernel is singular at t: the right end of [a,t], the left end of [t,b]
            let endpoint = match side {
                Side::Left => Endpoint::Right,
                Side::Right => Endpoint::Left,
            };
            let mut r = integrate_singular(|s| f.eval(s), span, alpha, endpoint, cfg)?;
            let norm = gamma(alpha);
            r.value /= norm;
            r.error_estimate /= norm;
            Ok(r)
        }
        Family::Exp => {
            if !(t >= a && t <= b) {
                return Err(Error::invalid(format!("t = {t} outside [a, b] = [{a}, {b}]")));
            }
            let (lo, hi) = match side {
                Side::Left => (a, t),
                Side::Right => (t, b),
            };
            if lo == hi {
                return Ok(QuadResult {
                    value: 0.0,
                    error_estimate: 0.0,
                    subdivisions_used: 0,
                    converged: true,
                });
            }
            let rate = params.decay();
            let mut r = integrate_fallible(
                |s| {
                    let dist = match side {
                        Side::Left => t - s,
                        Side::Right => s - t,
                    };
                    Ok::<_, Error>((-rate * dist).exp() * f.eval(s)?)
                },
                Interval::new(lo, hi)?,
                cfg,
            )?;
            r.value /= alpha;
            r.error_estimate /= alpha;
            Ok(r)
        }
    }
}

fn value_of<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, family: Family, side: Side, t: f64) -> Result<f64> {
    let params = FracParams::new(alpha, family)?;
    fractional_integral(f, iv, params, side, t, &QuadConfig::tight()).map(|r| r.value)
}

/// `I^α_{a+} f(t) = (1/Γ(α)) ∫ₐᵗ (t−s)^{α−1} f(s) ds`, `t ∈ (a, b]`.
pub fn rl_left<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, t: f64) -> Result<f64> {
    value_of(f, iv, alpha, Family::Rl, Side::Left, t)
}

/// `I^α_{b−} f(t) = (1/Γ(α)) ∫ₜᵇ (s−t)^{α−1} f(s) ds`, `t ∈ [a, b)`.
pub fn rl_right<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, t: f64) -> Result<f64> {
    value_of(f, iv, alpha, Family::Rl, Side::Right, t)
}

/// `(1/α) ∫ₐᵗ exp(−((1−α)/α)(t−s)) f(s) ds`, `0 < α < 1`.
pub fn exp_left<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, t: f64) -> Result<f64> {
    value_of(f, iv, alpha, Family::Exp, Side::Left, t)
}

/// `(1/α) ∫ₜᵇ exp(−((1−α)/α)(s−t)) f(s) ds`, `0 < α < 1`.
pub fn exp_right<F: RealFn + ?Sized>(f: &F, iv: Interval, alpha: f64, t: f64) -> Result<f64> {
    value_of(f, iv, alpha, Family::Exp, Side::Right, t)
}

/// `I^α_{a+} f(b) + I^α_{b−} f(a)`, the combination every fractional bound uses.
pub fn endpoint_sum<F: RealFn + ?Sized>(f: &F, iv: Interval, params: FracParams, cfg: &QuadConfig) -> Result<f64> {
    let left = fractional_integral(f, iv, params, Side::Left, iv.b(), cfg)?;
    let right = fractional_integral(f, iv, params, Side::Right, iv.a(), cfg)?;
    Ok(left.value + right.value)
}

/// Closed form of `I^α_{a+}` applied to `(s−a)^k` at `t`: `Γ(k+1)/Γ(k+1+α)·(t−a)^{k+α}`.
pub fn rl_monomial(k: f64, alpha: f64, span: f64) -> f64 {
    gamma(k + 1.0) / gamma(k + 1.0 + alpha) * span.powf(k + alpha)
}

/// Closed form of either exponential-kernel operator applied to `f ≡ 1` over a
/// span of length `len`: `(1 − e^{−ρ})/(1 − α)` with `ρ = (1−α)·len/α`.
pub fn exp_of_one(alpha: f64, len: f64) -> f64 {
    let rho = (1.0 - alpha) * len / alpha;
    -(-rho).exp_m1() / (1.0 - alpha)
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::funcspec::{build_exp, FuncExpr};

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn one() -> FuncExpr {
        FuncExpr::constant(1.0)
    }

    #[test]
    fn rl_examples() {
        let two_over_sqrt_pi = 1.128_379_167_095_512_6;
        assert!((rl_left(&one(), unit(), 0.5, 1.0).unwrap() - two_over_sqrt_pi).abs() < 1e-12);
        assert!((rl_left(&one(), unit(), 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        let g2_over_g25 = 0.752_252_778_063_675;
        assert!((rl_left(&FuncExpr::x(), unit(), 0.5, 1.0).unwrap() - g2_over_g25).abs() < 1e-12);

        assert!((rl_right(&one(), unit(), 0.5, 0.0).unwrap() - two_over_sqrt_pi).abs() < 1e-12);
        assert!((rl_right(&one(), unit(), 1.0, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let one_minus_s = one() - FuncExpr::x();
        assert!((rl_right(&one_minus_s, unit(), 0.5, 0.0).unwrap() - g2_over_g25).abs() < 1e-12);
    }

    #[test]
    fn exp_examples() {
        assert!((exp_left(&one(), unit(), 0.5, 1.0).unwrap() - 1.264_241_117_657_115_4).abs() < 1e-13);
        assert_eq!(exp_left(&one(), unit(), 0.9, 0.0).unwrap(), 0.0);
        assert!((exp_left(&build_exp(1.0), unit(), 0.5, 1.0).unwrap() - 2.350_402_387_287_603).abs() < 1e-12);

        assert!((exp_right(&one(), unit(), 0.5, 0.0).unwrap() - 1.264_241_117_657_115_4).abs() < 1e-13);
        assert_eq!(exp_right(&one(), unit(), 0.5, 1.0).unwrap(), 0.0);
        assert!((exp_right(&build_exp(-1.0), unit(), 0.5, 0.0).unwrap() - 0.864_664_716_763_387_3).abs() < 1e-12);
    }

    #[test]
    fn parameter_validation() {
        assert!(FracParams::new(0.0, Family::Rl).is_err());
        assert!(FracParams::new(2.5, Family::Rl).is_ok());
        assert!(FracParams::new(1.0, Family::Exp).is_err());
        assert!(FracParams::new(0.0, Family::Exp).is_err());
        let e = FracParams::new(-1.0, Family::Rl).unwrap_err();
        assert!(e.to_string().contains("alpha must be positive for family rl"));

        assert!(rl_left(&one(), unit(), 0.5, 0.0).is_err());
        assert!(rl_left(&one(), unit(), 0.5, 1.5).is_err());
        assert!(rl_right(&one(), unit(), 0.5, 1.0).is_err());
        assert!(exp_left(&one(), unit(), 0.5, -0.1).is_err());
    }

    #[test]
    fn closed_form_helpers() {
        assert!((rl_monomial(0.0, 0.5, 1.0) - 1.128_379_167_095_512_6).abs() < 1e-14);
        assert!((exp_of_one(0.5, 1.0) - 1.264_241_117_657_115_4).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_surface() {
        let f = crate::funcspec::build_power(0.5);
        let iv = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(rl_left(&f, iv, 0.5, 1.0), Err(Error::Domain { .. })));
    }
}
