//! Seeded factories for hyperbolic p-convex functions and positive weights.
//!
//! Closed-form functions are nonnegative combinations of atoms that each
//! satisfy `f″ − p²f >= 0`:
//!
//! - `cosh(q(x−c))` with `|p| <= q <= 2|p|`,
//! - `e^{μ(x−c)}` and `e^{−μ(x−c)}` with `|p| <= μ <= 2|p|`,
//! - `cosh(p(x−c))`, the equality member.
//!
//! Every atom is positive, so `f″ >= p²f > 0` and the functions are also
//! classically convex. The ODE path solves `f″ = p²f + ψ` with `ψ >= 0` and
//! initial data chosen so the solution stays positive.

mod ode;
mod rng;

pub use ode::{OdeSolution, ODE_STEPS};
pub use rng::{substream, InstanceRng};

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convexity::Verdict;
use crate::error::{Error, Result};
use crate::funcspec::{Differentiated, FuncExpr, Interval, RealFn, SmoothFn};
use crate::inequalities::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Relative frequency of the closed-form path in [`gen_function`].
    pub closed_form_weight: f64,
    /// Relative frequency of the ODE path in [`gen_function`].
    pub ode_weight: f64,
    pub p_range: (f64, f64),
    /// Range of the left endpoint of generated intervals.
    pub left_range: (f64, f64),
    pub length_range: (f64, f64),
    /// Range of every positive coefficient.
    pub coef_range: (f64, f64),
    /// Most atoms in one closed-form function.
    pub max_terms: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            closed_form_weight: 1.0,
            ode_weight: 0.0,
            p_range: (0.1, 5.0),
            left_range: (-1.0, 1.0),
            length_range: (0.2, 4.0),
            coef_range: (0.1, 2.0),
            max_terms: 3,
        }
    }
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
        return Err(Error::invalid(format!(
            "{name} must satisfy 0 < lo <= hi, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        check_range("p_range", self.p_range)?;
        check_range("length_range", self.length_range)?;
        let (lo, hi) = self.left_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::invalid(format!(
                "left_range must satisfy lo <= hi, got [{lo}, {hi}]"
            )));
        }
        check_range("coef_range", self.coef_range)?;
        let (c, o) = (self.closed_form_weight, self.ode_weight);
        if !(c >= 0.0 && o >= 0.0 && c + o > 0.0 && (c + o).is_finite()) {
            return Err(Error::invalid("family weights must be nonnegative with a positive sum"));
        }
        if self.max_terms == 0 {
            return Err(Error::invalid("max_terms must be >= 1"));
        }
        Ok(())
    }

    /// Random stream of instance `index`.
    pub fn rng(&self, index: u64) -> InstanceRng {
        substream(self.seed, index)
    }
}

fn draw<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// A p value from the configured range.
pub fn gen_p(rng: &mut impl Rng, cfg: &GenConfig) -> f64 {
    draw(rng, cfg.p_range)
}

/// An interval with left end and length drawn from the configured ranges.
pub fn gen_interval(rng: &mut impl Rng, cfg: &GenConfig) -> Interval {
    let (lo, hi) = cfg.left_range;
    let a = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
    let len = draw(rng, cfg.length_range);
    Interval::new(a, a + len).expect("positive length")
}

/// A closed-form hyperbolic p-convex function on `iv`.
pub fn gen_p_convex(rng: &mut impl Rng, cfg: &GenConfig, p: f64, iv: Interval) -> Result<FuncExpr> {
    cfg.validate()?;
    if p == 0.0 || !p.is_finite() {
        return Err(Error::invalid(format!("gen_p_convex needs finite p != 0, got {p}")));
    }
    let q0 = p.abs();
    let n = rng.gen_range(1..=cfg.max_terms);
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let coef = draw(rng, cfg.coef_range);
        let c = rng.gen_range(iv.a()..=iv.b());
        let atom = match rng.gen_range(0..4) {
            0 => {
                let q = rng.gen_range(q0..=2.0 * q0);
                FuncExpr::cosh(FuncExpr::x()).affine(q, -q * c)
            }
            1 => {
                let mu = rng.gen_range(q0..=2.0 * q0);
                FuncExpr::exp(FuncExpr::x()).affine(mu, -mu * c)
            }
            2 => {
                let mu = rng.gen_range(q0..=2.0 * q0);
                FuncExpr::exp(FuncExpr::x()).affine(-mu, mu * c)
            }
            _ => FuncExpr::cosh(FuncExpr::x()).affine(q0, -q0 * c),
        };
        terms.push(FuncExpr::scale(coef, atom));
    }
    Ok(FuncExpr::sum(terms))
}

/// A nonnegative forcing term `c₀ + c₁(x−a)² + c₂·cosh(q(x−m))`.
pub fn gen_forcing(rng: &mut impl Rng, cfg: &GenConfig, iv: Interval) -> FuncExpr {
    let c0 = draw(rng, cfg.coef_range);
    let c1 = draw(rng, cfg.coef_range);
    let c2 = draw(rng, cfg.coef_range);
    let q = rng.gen_range(0.1..=4.0 / iv.len());
    let x = FuncExpr::x();
    FuncExpr::constant(c0)
        + FuncExpr::scale(c1, FuncExpr::pow(x.clone().affine(1.0, -iv.a()), 2.0))
        + FuncExpr::scale(c2, FuncExpr::cosh(x).affine(q, -q * iv.mid()))
}

/// Solution of `f″ = p²f + ψ` with random `f(a) ∈ coef_range` and
/// `f′(a) >= −0.9·|p|·f(a)`, which keeps `f` positive.
pub fn gen_p_convex_ode(
    rng: &mut impl Rng,
    cfg: &GenConfig,
    p: f64,
    iv: Interval,
    psi: FuncExpr,
) -> Result<OdeSolution> {
    cfg.validate()?;
    let f0 = draw(rng, cfg.coef_range);
    let df0 = rng.gen_range(-0.9 * p.abs() * f0..=cfg.coef_range.1);
    OdeSolution::solve(p, iv, psi, f0, df0)
}

/// Output of either generation path.
#[derive(Debug, Clone)]
pub enum GeneratedFn {
    Closed(Differentiated),
    Ode(Arc<OdeSolution>),
}

impl GeneratedFn {
    /// Additive error bound on function values (zero for closed forms).
    pub fn error_budget(&self) -> f64 {
        match self {
            GeneratedFn::Closed(_) => 0.0,
            GeneratedFn::Ode(s) => s.error_budget(),
        }
    }

    pub fn as_expr(&self) -> Option<&FuncExpr> {
        match self {
            GeneratedFn::Closed(d) => Some(&d.f),
            GeneratedFn::Ode(_) => None,
        }
    }
}

impl RealFn for GeneratedFn {
    fn eval(&self, x: f64) -> Result<f64> {
        match self {
            GeneratedFn::Closed(d) => d.eval(x),
            GeneratedFn::Ode(s) => s.eval(x),
        }
    }

    fn describe(&self) -> String {
        match self {
            GeneratedFn::Closed(d) => d.describe(),
            GeneratedFn::Ode(s) => s.describe(),
        }
    }
}

impl SmoothFn for GeneratedFn {
    fn d1(&self, x: f64) -> Result<f64> {
        match self {
            GeneratedFn::Closed(d) => d.d1(x),
            GeneratedFn::Ode(s) => s.d1(x),
        }
    }

    fn d2(&self, x: f64) -> Result<f64> {
        match self {
            GeneratedFn::Closed(d) => d.d2(x),
            GeneratedFn::Ode(s) => s.d2(x),
        }
    }
}

/// Picks a path by the configured family weights and generates a function.
pub fn gen_function(rng: &mut impl Rng, cfg: &GenConfig, p: f64, iv: Interval) -> Result<GeneratedFn> {
    cfg.validate()?;
    let total = cfg.closed_form_weight + cfg.ode_weight;
    let use_ode = cfg.ode_weight > 0.0 && rng.gen_range(0.0..total) >= cfg.closed_form_weight;
    if use_ode {
        let psi = gen_forcing(rng, cfg, iv);
        Ok(GeneratedFn::Ode(Arc::new(gen_p_convex_ode(rng, cfg, p, iv, psi)?)))
    } else {
        Ok(GeneratedFn::Closed(gen_p_convex(rng, cfg, p, iv)?.differentiated()))
    }
}

/// `v(x) = c₀ + c₁(x−m)² + c₂(x−m)⁴ + c₃·cosh(q(x−m))` with `c₀ > 0` and each
/// other coefficient either zero or positive.
pub fn gen_symmetric_weight(rng: &mut impl Rng, cfg: &GenConfig, iv: Interval) -> WeightSpec {
    WeightSpec::new(symmetric_expr(rng, cfg, iv))
}

/// A symmetric weight plus a positive multiple of `e^{μ(x−m)}`.
pub fn gen_asymmetric_weight(rng: &mut impl Rng, cfg: &GenConfig, iv: Interval) -> WeightSpec {
    let base = symmetric_expr(rng, cfg, iv);
    let c = draw(rng, cfg.coef_range);
    let mu = rng.gen_range(0.5..=2.0) / iv.len().max(0.5);
    let skew = FuncExpr::exp(FuncExpr::x()).affine(mu, -mu * iv.mid());
    WeightSpec::asymmetric(base + FuncExpr::scale(c, skew))
}

fn symmetric_expr(rng: &mut impl Rng, cfg: &GenConfig, iv: Interval) -> FuncExpr {
    let centered = FuncExpr::x().affine(1.0, -iv.mid());
    let mut terms = vec![FuncExpr::constant(draw(rng, cfg.coef_range))];
    let maybe = |rng: &mut dyn rand::RngCore| rng.gen_bool(0.5).then(|| draw(rng, cfg.coef_range));
    if let Some(c) = maybe(rng) {
        terms.push(FuncExpr::scale(c, FuncExpr::pow(centered.clone(), 2.0)));
    }
    if let Some(c) = maybe(rng) {
        terms.push(FuncExpr::scale(c, FuncExpr::pow(centered.clone(), 4.0)));
    }
    if let Some(c) = maybe(rng) {
        let q = rng.gen_range(0.1..=6.0 / iv.len());
        terms.push(FuncExpr::scale(
            c,
            FuncExpr::cosh(FuncExpr::x()).affine(q, -q * iv.mid()),
        ));
    }
    FuncExpr::sum(terms)
}

/// A function with a known p-convexity verdict, for checking the checkers.
#[derive(Debug, Clone)]
pub struct ClassificationCase {
    pub f: Differentiated,
    pub iv: Interval,
    pub p: f64,
    pub expected: Verdict,
}

/// Draws one of four kinds in turn: strictly p-convex (closed-form with a
/// strict atom), its negation (strictly p-concave), an H-function
/// (boundary), or a power `x^r` on an interval straddling its sign change
/// `√(r(r−1))/p` (neither).
pub fn gen_classification_case(rng: &mut impl Rng, cfg: &GenConfig, index: u64) -> Result<ClassificationCase> {
    let kind = index % 4;
    if kind == 3 {
        let r: f64 = rng.gen_range(2.0..=4.0);
        let p = rng.gen_range(0.5..=2.0);
        let edge = (r * (r - 1.0)).sqrt() / p;
        let iv = Interval::new(rng.gen_range(0.3..=0.7) * edge, rng.gen_range(1.3..=1.7) * edge)?;
        let f = FuncExpr::pow(FuncExpr::x(), r).differentiated();
        return Ok(ClassificationCase {
            f,
            iv,
            p,
            expected: Verdict::Neither,
        });
    }
    let iv = gen_interval(rng, cfg);
    let p = gen_p(rng, cfg).min(5.0 / iv.len());
    if kind == 2 {
        let a = draw(rng, cfg.coef_range);
        let b = rng.gen_range(-1.0..=1.0) * a;
        let h = FuncExpr::cosh(FuncExpr::x()).affine(p, -p * iv.mid());
        let s = FuncExpr::sinh(FuncExpr::x()).affine(p, -p * iv.mid());
        let f = (FuncExpr::scale(a, h) + FuncExpr::scale(b, s)).differentiated();
        return Ok(ClassificationCase {
            f,
            iv,
            p,
            expected: Verdict::Boundary,
        });
    }
    let base = gen_p_convex(rng, cfg, p, iv)?;
    let q = rng.gen_range(1.2 * p..=2.0 * p);
    let c = rng.gen_range(iv.a()..=iv.b());
    let strict = FuncExpr::scale(
        draw(rng, cfg.coef_range),
        FuncExpr::cosh(FuncExpr::x()).affine(q, -q * c),
    );
    let f = base + strict;
    Ok(if kind == 0 {
        ClassificationCase {
            f: f.differentiated(),
            iv,
            p,
            expected: Verdict::Convex,
        }
    } else {
        ClassificationCase {
            f: (-f).differentiated(),
            iv,
            p,
            expected: Verdict::Concave,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::{check_all, check_second_order, CheckOptions};

    #[test]
    fn spec_draws() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let o = CheckOptions::default();
        let f = FuncExpr::cosh(FuncExpr::x()).affine(2.0, -0.6).differentiated();
        assert_eq!(check_second_order(&f, iv, 1.0, &o).unwrap().verdict, Verdict::Convex);
        let g = crate::parse("exp(1.5*x) + 0.5*exp(-2*x)").unwrap().differentiated();
        assert_eq!(check_second_order(&g, iv, 1.0, &o).unwrap().verdict, Verdict::Convex);
        let h = FuncExpr::cosh(FuncExpr::x()).affine(1.0, -0.3).differentiated();
        assert_eq!(check_second_order(&h, iv, 1.0, &o).unwrap().verdict, Verdict::Boundary);
    }

    #[test]
    fn generated_functions_pass_every_check() {
        let cfg = GenConfig {
            ode_weight: 1.0,
            ..GenConfig::default()
        };
        let o = CheckOptions { grid_n: 31, tol: 1e-9 };
        for i in 0..40 {
            let mut rng = cfg.rng(i);
            let iv = gen_interval(&mut rng, &cfg);
            let p = gen_p(&mut rng, &cfg).min(5.0 / iv.len());
            let f = gen_function(&mut rng, &cfg, p, iv).unwrap();
            let (reports, _) = check_all(&f, iv, p, &o).unwrap();
            for r in reports {
                assert!(
                    matches!(r.verdict, Verdict::Convex | Verdict::Boundary),
                    "{i}: {} {r:?}",
                    f.describe()
                );
            }
        }
    }

    #[test]
    fn weights_are_positive_and_symmetric() {
        let cfg = GenConfig::default();
        for i in 0..50 {
            let mut rng = cfg.rng(i);
            let iv = gen_interval(&mut rng, &cfg);
            let w = gen_symmetric_weight(&mut rng, &cfg, iv);
            w.validate(iv).unwrap();
            for x in iv.grid(57) {
                let d = w.func().eval(iv.reflect(x)).unwrap() - w.func().eval(x).unwrap();
                assert!(d.abs() <= 1e-12 * w.func().eval(x).unwrap().max(1.0));
            }
            let skew = gen_asymmetric_weight(&mut rng, &cfg, iv);
            skew.validate(iv).unwrap();
            assert!(WeightSpec::new(skew.func().clone()).validate(iv).is_err());
        }
    }

    #[test]
    fn streams_are_deterministic() {
        let cfg = GenConfig::default();
        let describe = |i| {
            let mut rng = cfg.rng(i);
            let iv = gen_interval(&mut rng, &cfg);
            let f = gen_p_convex(&mut rng, &cfg, 1.3, iv).unwrap();
            let w = gen_symmetric_weight(&mut rng, &cfg, iv);
            format!("{iv:?} {f} {}", w.func())
        };
        assert_eq!(describe(3), describe(3));
        assert_ne!(describe(3), describe(4));
    }

    #[test]
    fn classification_cases_match_their_labels() {
        let cfg = GenConfig::default();
        let o = CheckOptions::default();
        for i in 0..24 {
            let case = gen_classification_case(&mut cfg.rng(i), &cfg, i).unwrap();
            let (reports, agree) = check_all(&case.f, case.iv, case.p, &o).unwrap();
            assert!(agree, "{i}: {reports:?}");
            assert_eq!(reports[0].verdict, case.expected, "{i}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig::default().validate().is_ok());
        let bad = GenConfig {
            p_range: (2.0, 1.0),
            ..GenConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = GenConfig {
            closed_form_weight: 0.0,
            ode_weight: 0.0,
            ..GenConfig::default()
        };
        assert!(bad.validate().is_err());
        let mut rng = GenConfig::default().rng(0);
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(gen_p_convex(&mut rng, &GenConfig::default(), 0.0, iv).is_err());
    }
}
