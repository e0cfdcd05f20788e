//! Hyperbolic p-convexity: the chord majorant and four independent grid tests.
//!
//! A function is hyperbolic p-convex on `I` when on every `[a, b] ⊂ I`
//!
//! ```text
//! f(x) <= sinh(p(b−x))/sinh(p(b−a))·f(a) + sinh(p(x−a))/sinh(p(b−a))·f(b)
//! ```
//!
//! The checks below test this definition directly ([`check_chord`]) and via
//! three equivalent characterisations: `f″ − p²f >= 0` ([`check_second_order`]),
//! the gradient inequality ([`check_gradient`]) and monotonicity of
//! `φ(x) = f′(x) − p²∫ₐˣ f` ([`check_phi_monotone`]). `p = 0` gives the
//! classical convexity test in every case.
//!
//! Each check measures two one-sided violations, `convex_excess` (how far
//! the convex inequality fails) and `concave_excess` (how far the reversed
//! inequality fails), and compares both against `tol·max(1, scale)` where
//! `scale` is the largest term magnitude the check met.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{FuncExpr, Interval, RealFn, SmoothFn};
use crate::hyperbolic::{cosh, sinh, sinh_ratio, sinhc};
use crate::quadrature::{integrate_fallible, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Convex,
    Concave,
    Neither,
    /// Both one-sided violations are within tolerance: `f` is an H-function.
    Boundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convex => "CONVEX",
            Verdict::Concave => "CONCAVE",
            Verdict::Neither => "NEITHER",
            Verdict::Boundary => "BOUNDARY",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Chord,
    SecondOrder,
    Gradient,
    Phi,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Chord => "CHORD",
            Method::SecondOrder => "SECOND_ORDER",
            Method::Gradient => "GRADIENT",
            Method::Phi => "PHI",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    /// Violation of the inequality direction named by `verdict`; for
    /// `Neither` the convex-direction violation.
    pub worst_violation: f64,
    pub witness_x: f64,
    pub method: Method,
    pub convex_excess: f64,
    pub concave_excess: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub grid_n: usize,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { grid_n: 101, tol: 1e-9 }
    }
}

impl CheckOptions {
    fn validate(&self) -> Result<()> {
        if self.grid_n < 3 {
            return Err(Error::invalid(format!("grid_n must be >= 3, got {}", self.grid_n)));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::invalid("convexity tolerance must be >= 0"));
        }
        Ok(())
    }
}

/// Running maxima of the two one-sided violations.
struct Tally {
    convex: f64,
    convex_at: f64,
    concave: f64,
    concave_at: f64,
    scale: f64,
}

impl Tally {
    fn new(x0: f64) -> Self {
        Tally {
            convex: 0.0,
            convex_at: x0,
            concave: 0.0,
            concave_at: x0,
            scale: 0.0,
        }
    }

    /// `margin >= 0` is what a p-convex function guarantees.
    fn record(&mut self, margin: f64, x: f64) -> Result<()> {
        if !margin.is_finite() {
            return Err(Error::invalid(format!("non-finite convexity margin at x = {x}")));
        }
        if -margin > self.convex {
            self.convex = -margin;
            self.convex_at = x;
        }
        if margin > self.concave {
            self.concave = margin;
            self.concave_at = x;
        }
        Ok(())
    }

    fn see(&mut self, magnitude: f64) {
        self.scale = self.scale.max(magnitude.abs());
    }

    fn finish(self, method: Method, tol: f64) -> ConvexityReport {
        let t = tol * self.scale.max(1.0);
        let (verdict, worst, at) = match (self.convex <= t, self.concave <= t) {
            (true, true) => {
                if self.convex >= self.concave {
                    (Verdict::Boundary, self.convex, self.convex_at)
                } else {
                    (Verdict::Boundary, self.concave, self.concave_at)
                }
            }
            (true, false) => (Verdict::Convex, self.convex, self.convex_at),
            (false, true) => (Verdict::Concave, self.concave, self.concave_at),
            (false, false) => (Verdict::Neither, self.convex, self.convex_at),
        };
        ConvexityReport {
            verdict,
            worst_violation: worst,
            witness_x: at,
            method,
            convex_excess: self.convex,
            concave_excess: self.concave,
            scale: self.scale,
        }
    }
}

/// Value at `x` of the hyperbolic chord through `(a, fa)` and `(b, fb)`.
pub fn chord_value(a: f64, b: f64, fa: f64, fb: f64, p: f64, x: f64) -> f64 {
    let len = b - a;
    if p == 0.0 {
        return fa + (fb - fa) * (x - a) / len;
    }
    let q = p.abs();
    fa * sinh_ratio(q * (b - x), q * len) + fb * sinh_ratio(q * (x - a), q * len)
}

/// The H-function `A cosh(px) + B sinh(px)` matching `f` at both endpoints,
/// written as `c₁ sinh(p(b−x)) + c₂ sinh(p(x−a))`. `p = 0` gives the
/// straight chord.
pub fn chord_majorant<F: RealFn + ?Sized>(f: &F, iv: Interval, p: f64) -> Result<FuncExpr> {
    let (a, b) = (iv.a(), iv.b());
    let fa = f.eval(a)?;
    let fb = f.eval(b)?;
    if p == 0.0 {
        let slope = (fb - fa) / iv.len();
        return Ok(FuncExpr::constant(fa) + FuncExpr::scale(slope, FuncExpr::x()).affine(1.0, -a));
    }
    let s = sinh(p * iv.len());
    let left = FuncExpr::sinh(FuncExpr::x()).affine(-p, p * b);
    let right = FuncExpr::sinh(FuncExpr::x()).affine(p, -p * a);
    Ok(FuncExpr::scale(fa / s, left) + FuncExpr::scale(fb / s, right))
}

/// Tests the defining chord inequality on every grid sub-interval `[xᵢ, xⱼ]`
/// at every interior grid point.
pub fn check_chord<F: RealFn + ?Sized>(f: &F, iv: Interval, p: f64, opts: &CheckOptions) -> Result<ConvexityReport> {
    opts.validate()?;
    let xs = iv.grid(opts.grid_n);
    let fs = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new(xs[0]);
    for v in &fs {
        tally.see(*v);
    }
    let n = xs.len();
    for i in 0..n {
        for j in i + 2..n {
            for k in i + 1..j {
                let h = chord_value(xs[i], xs[j], fs[i], fs[j], p, xs[k]);
                tally.record(h - fs[k], xs[k])?;
            }
        }
    }
    Ok(tally.finish(Method::Chord, opts.tol))
}

/// Tests `f″(x) − p²f(x) >= 0` on the grid.
pub fn check_second_order<F: SmoothFn + ?Sized>(
    f: &F,
    iv: Interval,
    p: f64,
    opts: &CheckOptions,
) -> Result<ConvexityReport> {
    opts.validate()?;
    let xs = iv.grid(opts.grid_n);
    let mut tally = Tally::new(xs[0]);
    let p2 = p * p;
    for &x in &xs {
        let d2 = f.d2(x)?;
        let v = p2 * f.eval(x)?;
        tally.see(d2);
        tally.see(v);
        tally.record(d2 - v, x)?;
    }
    Ok(tally.finish(Method::SecondOrder, opts.tol))
}

/// Tests `f(y) >= f(x)·cosh(p(y−x)) + (f′(x)/p)·sinh(p(y−x))` over all grid pairs.
///
/// The `1/p` factor (written here as `(y−x)·sinhc(p(y−x))`) is what makes
/// H-functions satisfy the inequality with equality; at `p = 0` it reduces to
/// the tangent-line inequality.
pub fn check_gradient<F: SmoothFn + ?Sized>(
    f: &F,
    iv: Interval,
    p: f64,
    opts: &CheckOptions,
) -> Result<ConvexityReport> {
    opts.validate()?;
    let xs = iv.grid(opts.grid_n);
    let fs = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    let ds = xs.iter().map(|&x| f.d1(x)).collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new(xs[0]);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = y - x;
            let base = fs[i] * cosh(p * d);
            let slope = ds[i] * d * sinhc(p * d);
            tally.see(fs[j]);
            tally.see(base);
            tally.see(slope);
            tally.record(fs[j] - base - slope, x)?;
        }
    }
    Ok(tally.finish(Method::Gradient, opts.tol))
}

/// Tests that `φ(x) = f′(x) − p²∫ₐˣ f(t) dt` is nondecreasing on the grid.
pub fn check_phi_monotone<F: SmoothFn + ?Sized>(
    f: &F,
    iv: Interval,
    p: f64,
    opts: &CheckOptions,
) -> Result<ConvexityReport> {
    opts.validate()?;
    let phi = phi_on_grid(f, iv, p, opts.grid_n)?;
    let xs = iv.grid(opts.grid_n);
    let mut tally = Tally::new(xs[0]);
    for v in &phi {
        tally.see(*v);
    }
    // largest drop and largest rise over all ordered pairs, in one pass
    let (mut hi, mut hi_at) = (phi[0], xs[0]);
    let (mut lo, mut lo_at) = (phi[0], xs[0]);
    for (k, &v) in phi.iter().enumerate().skip(1) {
        let x = xs[k];
        if v - hi < -tally.convex {
            tally.convex = hi - v;
            tally.convex_at = hi_at;
        }
        if v - lo > tally.concave {
            tally.concave = v - lo;
            tally.concave_at = lo_at;
        }
        if v > hi {
            hi = v;
            hi_at = x;
        }
        if v < lo {
            lo = v;
            lo_at = x;
        }
    }
    Ok(tally.finish(Method::Phi, opts.tol))
}

/// `φ(xₖ)` on a uniform grid; the running integral is accumulated panel by panel.
pub fn phi_on_grid<F: SmoothFn + ?Sized>(f: &F, iv: Interval, p: f64, grid_n: usize) -> Result<Vec<f64>> {
    let xs = iv.grid(grid_n);
    let cfg = QuadConfig::tight();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(xs.len());
    out.push(f.d1(xs[0])?);
    for w in xs.windows(2) {
        acc += integrate_fallible(|t| f.eval(t), Interval::new(w[0], w[1])?, &cfg)?.value;
        out.push(f.d1(w[1])? - p * p * acc);
    }
    Ok(out)
}

/// Runs all four checks; the bool reports whether their verdicts agree.
pub fn check_all<F: SmoothFn + ?Sized>(
    f: &F,
    iv: Interval,
    p: f64,
    opts: &CheckOptions,
) -> Result<([ConvexityReport; 4], bool)> {
    let reports = [
        check_chord(f, iv, p, opts)?,
        check_second_order(f, iv, p, opts)?,
        check_gradient(f, iv, p, opts)?,
        check_phi_monotone(f, iv, p, opts)?,
    ];
    let agree = reports.iter().all(|r| r.verdict == reports[0].verdict);
    Ok((reports, agree))
}

/// Convexity regions of `x ↦ x^r` on `(0, ∞)` for a given `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRegions {
    /// Open interval where `f″ − p²f > 0`.
    pub convex: Option<(f64, f64)>,
    /// Open interval where `f″ − p²f < 0` (upper end may be infinite).
    pub concave: Option<(f64, f64)>,
    /// Sign change `√(r(r−1))/|p|`, when there is one.
    pub boundary: Option<f64>,
}

/// Classifies `x^r` on `(0, ∞)`: for `r ∈ (−∞,0) ∪ [1,∞)` it is p-convex on
/// `(0, √(r(r−1))/|p|)` and p-concave beyond; for `r ∈ [0,1)` it is p-concave
/// everywhere.
pub fn classify_power(r: f64, p: f64) -> Result<PowerRegions> {
    if p == 0.0 || !p.is_finite() || !r.is_finite() {
        return Err(Error::invalid("classify_power needs finite r and p != 0"));
    }
    if (0.0..1.0).contains(&r) {
        return Ok(PowerRegions {
            convex: None,
            concave: Some((0.0, f64::INFINITY)),
            boundary: None,
        });
    }
    let edge = (r * (r - 1.0)).sqrt() / p.abs();
    if edge == 0.0 {
        // r = 1: f″ − p²f = −p²x < 0
        return Ok(PowerRegions {
            convex: None,
            concave: Some((0.0, f64::INFINITY)),
            boundary: None,
        });
    }
    Ok(PowerRegions {
        convex: Some((0.0, edge)),
        concave: Some((edge, f64::INFINITY)),
        boundary: Some(edge),
    })
}

/// `e^{μx}` is p-convex iff `|μ| > |p|`, p-concave iff `|μ| < |p|`.
pub fn classify_exponential(mu: f64, p: f64) -> Result<Verdict> {
    if mu == 0.0 || p == 0.0 {
        return Err(Error::invalid("classify_exponential needs mu != 0 and p != 0"));
    }
    Ok(match mu.abs().partial_cmp(&p.abs()) {
        Some(std::cmp::Ordering::Greater) => Verdict::Convex,
        Some(std::cmp::Ordering::Less) => Verdict::Concave,
        Some(std::cmp::Ordering::Equal) => Verdict::Boundary,
        None => return Err(Error::invalid("classify_exponential got NaN")),
    })
}
