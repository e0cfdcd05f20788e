//! `f″ = p²f + ψ` solved with classical RK4 on a fixed grid and cubic
//! Hermite dense output.

use crate::error::{Error, Result};
use crate::funcspec::{FuncExpr, Interval, RealFn, SmoothFn};

/// Number of RK4 steps across the interval.
pub const ODE_STEPS: usize = 4096;

/// Grid solution of `f″ = p²f + ψ` with given `f(a)`, `f′(a)`.
///
/// `eval` interpolates `f` from `(f, f′)` at the nodes, `d1` interpolates
/// `f′` from `(f′, f″)`, and `d2` is the right-hand side evaluated at the
/// interpolated `f`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    iv: Interval,
    p: f64,
    psi: FuncExpr,
    f0: f64,
    df0: f64,
    h: f64,
    f: Vec<f64>,
    df: Vec<f64>,
    d2f: Vec<f64>,
    error_budget: f64,
}

fn rk4_run(p2: f64, psi: &FuncExpr, a: f64, h: f64, steps: usize, f0: f64, df0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut f = Vec::with_capacity(steps + 1);
    let mut df = Vec::with_capacity(steps + 1);
    let (mut y, mut z) = (f0, df0);
    f.push(y);
    df.push(z);
    let rhs = |x: f64, y: f64| -> Result<f64> { Ok(p2 * y + psi.eval(x)?) };
    for i in 0..steps {
        let x = a + h * i as f64;
        let k1y = z;
        let k1z = rhs(x, y)?;
        let k2y = z + 0.5 * h * k1z;
        let k2z = rhs(x + 0.5 * h, y + 0.5 * h * k1y)?;
        let k3y = z + 0.5 * h * k2z;
        let k3z = rhs(x + 0.5 * h, y + 0.5 * h * k2y)?;
        let k4y = z + h * k3z;
        let k4z = rhs(x + h, y + h * k3y)?;
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        f.push(y);
        df.push(z);
    }
    Ok((f, df))
}

impl OdeSolution {
    /// Solves on `iv` with `ψ` required nonnegative at every node and half-node.
    pub fn solve(p: f64, iv: Interval, psi: FuncExpr, f0: f64, df0: f64) -> Result<Self> {
        if !(p.is_finite() && f0.is_finite() && df0.is_finite()) {
            return Err(Error::invalid("ODE parameters must be finite"));
        }
        let a = iv.a();
        let h = iv.len() / ODE_STEPS as f64;
        for k in 0..=2 * ODE_STEPS {
            let x = if k == 2 * ODE_STEPS {
                iv.b()
            } else {
                a + 0.5 * h * k as f64
            };
            let v = psi.eval(x)?;
            if !(v >= 0.0) {
                return Err(Error::invalid(format!(
                    "forcing term {psi} is negative at x = {x} (value {v})"
                )));
            }
        }
        let p2 = p * p;
        let (f, df) = rk4_run(p2, &psi, a, h, ODE_STEPS, f0, df0)?;
        let (coarse, _) = rk4_run(p2, &psi, a, 2.0 * h, ODE_STEPS / 2, f0, df0)?;
        // step-doubling estimate of the fine solution's global error
        let error_budget = coarse
            .iter()
            .enumerate()
            .map(|(i, c)| (f[2 * i] - c).abs() / 15.0)
            .fold(0.0, f64::max);
        let d2f = f
            .iter()
            .enumerate()
            .map(|(i, &y)| Ok(p2 * y + psi.eval(a + h * i as f64)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(OdeSolution {
            iv,
            p,
            psi,
            f0,
            df0,
            h,
            f,
            df,
            d2f,
            error_budget,
        })
    }

    pub fn interval(&self) -> Interval {
        self.iv
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Estimated maximum absolute error of the node values.
    pub fn error_budget(&self) -> f64 {
        self.error_budget
    }

    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let (a, b) = (self.iv.a(), self.iv.b());
        let slack = 1e-12 * self.iv.len();
        if !(x >= a - slack && x <= b + slack) {
            return Err(Error::Domain {
                expr: self.describe(),
                x,
            });
        }
        let s = ((x - a) / self.h).clamp(0.0, ODE_STEPS as f64);
        let i = (s.floor() as usize).min(ODE_STEPS - 1);
        Ok((i, s - i as f64))
    }

    fn hermite(&self, vals: &[f64], slopes: &[f64], i: usize, t: f64) -> f64 {
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * vals[i] + h10 * self.h * slopes[i] + h01 * vals[i + 1] + h11 * self.h * slopes[i + 1]
    }
}

impl RealFn for OdeSolution {
    fn eval(&self, x: f64) -> Result<f64> {
        let (i, t) = self.locate(x)?;
        Ok(self.hermite(&self.f, &self.df, i, t))
    }

    fn describe(&self) -> String {
        format!(
            "ode(p={}, psi={}, f(a)={}, df(a)={})",
            self.p, self.psi, self.f0, self.df0
        )
    }
}

impl SmoothFn for OdeSolution {
    fn d1(&self, x: f64) -> Result<f64> {
        let (i, t) = self.locate(x)?;
        Ok(self.hermite(&self.df, &self.d2f, i, t))
    }

    fn d2(&self, x: f64) -> Result<f64> {
        Ok(self.p * self.p * self.eval(x)? + self.psi.eval(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_solution_is_cosh() {
        let p = 1.7;
        let iv = Interval::new(0.0, 2.0).unwrap();
        let s = OdeSolution::solve(p, iv, FuncExpr::constant(0.0), 1.0, 0.0).unwrap();
        for k in 0..=997 {
            let x = 2.0 * k as f64 / 997.0;
            assert!((s.eval(x).unwrap() - (p * x).cosh()).abs() < 1e-9, "{x}");
            assert!((s.d1(x).unwrap() - p * (p * x).sinh()).abs() < 1e-9, "{x}");
            assert!((s.d2(x).unwrap() - p * p * (p * x).cosh()).abs() < 1e-9, "{x}");
        }
        assert!(s.error_budget() < 1e-9);
    }

    #[test]
    fn constant_forcing() {
        let c = 0.8;
        let iv = Interval::new(0.0, 3.0).unwrap();
        let s = OdeSolution::solve(1.0, iv, FuncExpr::constant(c), 0.0, 0.0).unwrap();
        for k in 0..=613 {
            let x = 3.0 * k as f64 / 613.0;
            assert!((s.eval(x).unwrap() - c * (x.cosh() - 1.0)).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn negative_forcing_is_rejected() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let psi = crate::funcspec::parse("x - 0.5").unwrap();
        assert!(matches!(
            OdeSolution::solve(1.0, iv, psi, 1.0, 0.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn evaluation_outside_the_interval_fails() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let s = OdeSolution::solve(1.0, iv, FuncExpr::constant(0.0), 1.0, 0.0).unwrap();
        assert!(s.eval(1.5).is_err());
        assert!(s.eval(1.0).is_ok());
    }
}
