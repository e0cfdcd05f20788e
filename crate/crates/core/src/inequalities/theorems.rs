//! LHS/MID/RHS evaluators for every bound.

use crate::error::{Error, Result};
use crate::fracops::{Family, FracParams};
use crate::funcspec::{Interval, RealFn};
use crate::hyperbolic::{sech, sinhc, tanhc};
use crate::special::gamma;

use super::constants::{const_c, scaled_sinh_term, Kernel};
use super::{ConstantMode, EvalOptions, InequalityVerdict, TheoremId, WeightSpec};

struct Sides {
    lhs: f64,
    mid: Option<f64>,
    rhs: f64,
}

/// Evaluates one bound for `u` on `iv`.
///
/// `v` is required by the weighted bounds, `alpha` by the fractional ones and
/// `p` by the hyperbolic ones; parameters a bound does not use are ignored.
/// `u` is taken to be hyperbolic p-convex (classically convex for the
/// baselines); the verdict reports whether the computed sides respect the
/// chain within `opts.tol·max(1, |rhs|)`.
pub fn eval_theorem<U: RealFn + ?Sized>(
    id: TheoremId,
    u: &U,
    v: Option<&WeightSpec>,
    iv: Interval,
    alpha: Option<f64>,
    p: Option<f64>,
    opts: &EvalOptions,
) -> Result<InequalityVerdict> {
    let weight = if id.needs_weight() {
        let w = v.ok_or(Error::MissingParameter("weight"))?;
        if !w.is_symmetric() && !id.accepts_asymmetric_weight() {
            return Err(Error::InvalidWeight(format!("{id} requires a symmetric weight")));
        }
        w.validate(iv)?;
        Some(w)
    } else {
        None
    };
    let params = match id.family() {
        Some(family) => {
            let alpha = alpha.ok_or(Error::MissingParameter("alpha"))?;
            Some(FracParams::new(alpha, family)?)
        }
        None => None,
    };
    let p = if id.needs_p() {
        let p = p.ok_or(Error::MissingParameter("p"))?;
        if !p.is_finite() {
            return Err(Error::invalid(format!("p must be finite, got {p}")));
        }
        Some(p)
    } else {
        None
    };

    let sides = Evaluator { u, iv, opts }.sides(id, weight, params, p)?;
    let tol = opts.tol * sides.rhs.abs().max(1.0);
    let (slack_left, slack_right) = match sides.mid {
        Some(mid) => (Some(mid - sides.lhs), sides.rhs - mid),
        None => (None, sides.rhs - sides.lhs),
    };
    let all = [
        Some(sides.lhs),
        sides.mid,
        Some(sides.rhs),
        slack_left,
        Some(slack_right),
    ];
    if all.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!(
            "{id} produced a non-finite side on [{}, {}]",
            iv.a(),
            iv.b()
        )));
    }
    let holds = slack_right >= -tol && slack_left.is_none_or(|s| s >= -tol);
    Ok(InequalityVerdict {
        theorem_id: id,
        lhs: sides.lhs,
        mid: sides.mid,
        rhs: sides.rhs,
        slack_left,
        slack_right,
        holds,
        tol,
        a: iv.a(),
        b: iv.b(),
        p,
        alpha: params.map(|q| q.alpha()),
        mode: opts.mode,
    })
}

struct Evaluator<'a, U: ?Sized> {
    u: &'a U,
    iv: Interval,
    opts: &'a EvalOptions,
}

impl<U: RealFn + ?Sized> Evaluator<'_, U> {
    fn sides(
        &self,
        id: TheoremId,
        w: Option<&WeightSpec>,
        params: Option<FracParams>,
        p: Option<f64>,
    ) -> Result<Sides> {
        use TheoremId::*;
        let iv = self.iv;
        let len = iv.len();
        let um = self.u.eval(iv.mid())?;
        let ends = 0.5 * (self.u.eval(iv.a())? + self.u.eval(iv.b())?);
        let unit = WeightSpec::unit();
        let kernel = params.map_or(Kernel::Plain, Kernel::Frac);
        let p = p.unwrap_or(0.0);

        Ok(match id {
            HH_1_1 => Sides {
                lhs: um,
                mid: Some(self.weighted(&unit, Kernel::Plain)? / len),
                rhs: ends,
            },
            FEJER_1_2 | FHHF | FHHF2 => {
                let w = w.expect("weight checked");
                let mass = self.mass(w, kernel)?;
                Sides {
                    lhs: um * mass,
                    mid: Some(self.weighted(w, kernel)?),
                    rhs: ends * mass,
                }
            }
            FHH | FHH2 => {
                let params = params.expect("alpha checked");
                let norm = match params.family() {
                    Family::Rl => gamma(params.alpha() + 1.0) / (2.0 * len.powf(params.alpha())),
                    Family::Exp => {
                        let rho = params.decay() * len;
                        (1.0 - params.alpha()) / (-2.0 * (-rho).exp_m1())
                    }
                };
                Sides {
                    lhs: um,
                    mid: Some(norm * self.weighted(&unit, kernel)?),
                    rhs: ends,
                }
            }
            D1 => {
                let half = 0.5 * p * len;
                Sides {
                    lhs: um * len * sinhc(half),
                    mid: Some(self.weighted(&unit, Kernel::Plain)?),
                    rhs: 2.0 * ends * 0.5 * len * tanhc(half),
                }
            }
            D2 | D4 | D5 | D6 | D7 => {
                let w = if matches!(id, D4 | D5) {
                    &unit
                } else {
                    w.expect("weight checked")
                };
                let c = const_c(w, iv, kernel, p, &self.opts.quad)?;
                let sech_arg = match (id, self.opts.mode) {
                    (D4 | D5, ConstantMode::AsPrinted) => p * len,
                    _ => 0.5 * p * len,
                };
                Sides {
                    lhs: um * c,
                    mid: Some(self.weighted(w, kernel)?),
                    rhs: ends * sech(sech_arg) * c,
                }
            }
            D3 | D8 | D9 => {
                let w = w.expect("weight checked");
                let c = const_c(w, iv, kernel, p, &self.opts.quad)?;
                let s = scaled_sinh_term(w, iv, kernel, p, &self.opts.quad)?;
                let (ua, ub) = (self.u.eval(iv.a())?, self.u.eval(iv.b())?);
                let diff = match self.opts.mode {
                    ConstantMode::ProofConsistent => ub - ua,
                    ConstantMode::AsPrinted => ua - ub,
                };
                Sides {
                    lhs: self.weighted(w, kernel)?,
                    mid: None,
                    rhs: ends * sech(0.5 * p * len) * c + 0.5 * diff * s,
                }
            }
        })
    }

    /// `∫ u·w` against the kernel.
    fn weighted(&self, w: &WeightSpec, kernel: Kernel) -> Result<f64> {
        let (u, w) = (self.u, w.func());
        kernel.integrate(|x| Ok(u.eval(x)? * w.eval(x)?), self.iv, &self.opts.quad)
    }

    /// `∫ w` against the kernel.
    fn mass(&self, w: &WeightSpec, kernel: Kernel) -> Result<f64> {
        let w = w.func();
        kernel.integrate(|x| w.eval(x), self.iv, &self.opts.quad)
    }
}
