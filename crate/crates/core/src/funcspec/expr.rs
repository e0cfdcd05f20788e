use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperbolic;

/// Node kinds of a [`FuncExpr`]. The set is closed so that derivatives are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Identity,
    Sum(Vec<FuncExpr>),
    Product(Vec<FuncExpr>),
    Scale(f64, FuncExpr),
    /// `base^exponent`; a non-integer exponent restricts the base to `> 0`.
    Pow(FuncExpr, f64),
    Exp(FuncExpr),
    Cosh(FuncExpr),
    Sinh(FuncExpr),
    /// `inner(scale * x + shift)`.
    Affine {
        scale: f64,
        shift: f64,
        inner: FuncExpr,
    },
}

/// Immutable expression tree for a real function of one variable.
///
/// Cloning is cheap (the tree is reference counted) and values can be shared
/// across threads freely.
#[derive(Debug, Clone, PartialEq)]
pub struct FuncExpr(Arc<Node>);

fn is_integer(r: f64) -> bool {
    r == r.trunc() && r.abs() <= i32::MAX as f64
}

impl FuncExpr {
    fn wrap(node: Node) -> Self {
        FuncExpr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: f64) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn x() -> Self {
        Self::wrap(Node::Identity)
    }

    pub fn as_constant(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// True when the tree does not depend on `x`.
    pub fn is_constant(&self) -> bool {
        match self.node() {
            Node::Const(_) => true,
            Node::Identity => false,
            Node::Sum(cs) | Node::Product(cs) => cs.iter().all(FuncExpr::is_constant),
            Node::Scale(_, f) | Node::Pow(f, _) | Node::Exp(f) | Node::Cosh(f) | Node::Sinh(f) => f.is_constant(),
            Node::Affine { scale, inner, .. } => *scale == 0.0 || inner.is_constant(),
        }
    }

    pub fn sum(terms: Vec<FuncExpr>) -> Self {
        let mut folded = 0.0;
        let mut rest = Vec::with_capacity(terms.len());
        for t in terms {
            match t.node() {
                Node::Const(c) => folded += c,
                Node::Sum(inner) => {
                    for u in inner {
                        match u.as_constant() {
                            Some(c) => folded += c,
                            None => rest.push(u.clone()),
                        }
                    }
                }
                _ => rest.push(t),
            }
        }
        if folded != 0.0 || rest.is_empty() {
            rest.push(Self::constant(folded));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Self::wrap(Node::Sum(rest))
        }
    }

    pub fn product(factors: Vec<FuncExpr>) -> Self {
        let mut coeff = 1.0;
        let mut rest = Vec::with_capacity(factors.len());
        for f in factors {
            match f.node() {
                Node::Const(c) => coeff *= c,
                Node::Scale(c, g) => {
                    coeff *= c;
                    rest.push(g.clone());
                }
                _ => rest.push(f),
            }
        }
        if coeff == 0.0 || rest.is_empty() {
            return Self::constant(coeff);
        }
        let body = if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Self::wrap(Node::Product(rest))
        };
        Self::scale(coeff, body)
    }

    pub fn scale(c: f64, f: FuncExpr) -> Self {
        if c == 1.0 {
            return f;
        }
        match f.node() {
            _ if c == 0.0 => Self::constant(0.0),
            Node::Const(v) => Self::constant(c * v),
            Node::Scale(d, g) => Self::scale(c * d, g.clone()),
            _ => Self::wrap(Node::Scale(c, f)),
        }
    }

    pub fn pow(base: FuncExpr, exponent: f64) -> Self {
        if exponent == 0.0 {
            return Self::constant(1.0);
        }
        if exponent == 1.0 {
            return base;
        }
        if let Some(v) = base.as_constant() {
            if v > 0.0 || (is_integer(exponent) && v != 0.0) {
                return Self::constant(v.powf(exponent));
            }
        }
        Self::wrap(Node::Pow(base, exponent))
    }

    pub fn exp(arg: FuncExpr) -> Self {
        match arg.as_constant() {
            Some(v) => Self::constant(v.exp()),
            None => Self::wrap(Node::Exp(arg)),
        }
    }

    pub fn cosh(arg: FuncExpr) -> Self {
        match arg.as_constant() {
            Some(v) => Self::constant(hyperbolic::cosh(v)),
            None => Self::wrap(Node::Cosh(arg)),
        }
    }

    pub fn sinh(arg: FuncExpr) -> Self {
        match arg.as_constant() {
            Some(v) => Self::constant(hyperbolic::sinh(v)),
            None => Self::wrap(Node::Sinh(arg)),
        }
    }

    /// `x ↦ self(scale·x + shift)`.
    pub fn affine(self, scale: f64, shift: f64) -> Self {
        if scale == 1.0 && shift == 0.0 {
            return self;
        }
        match self.node() {
            Node::Const(_) => self,
            Node::Affine {
                scale: s2,
                shift: t2,
                inner,
            } => {
                // inner(s2·(s·x + t) + t2)
                inner.clone().affine(s2 * scale, s2 * shift + t2)
            }
            _ => Self::wrap(Node::Affine {
                scale,
                shift,
                inner: self,
            }),
        }
    }

    /// Evaluates the expression at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self.node() {
            Node::Const(c) => *c,
            Node::Identity => x,
            Node::Sum(cs) => {
                let mut acc = 0.0;
                for c in cs {
                    acc += c.eval(x)?;
                }
                acc
            }
            Node::Product(cs) => {
                let mut acc = 1.0;
                for c in cs {
                    acc *= c.eval(x)?;
                }
                acc
            }
            Node::Scale(c, f) => c * f.eval(x)?,
            Node::Pow(base, r) => {
                let b = base.eval(x)?;
                if is_integer(*r) {
                    if b == 0.0 && *r < 0.0 {
                        return Err(self.domain_error(x));
                    }
                    b.powi(*r as i32)
                } else {
                    if !(b > 0.0) {
                        return Err(self.domain_error(x));
                    }
                    b.powf(*r)
                }
            }
            Node::Exp(f) => f.eval(x)?.exp(),
            Node::Cosh(f) => hyperbolic::cosh(f.eval(x)?),
            Node::Sinh(f) => hyperbolic::sinh(f.eval(x)?),
            Node::Affine { scale, shift, inner } => inner.eval(scale * x + shift)?,
        })
    }

    fn domain_error(&self, x: f64) -> Error {
        Error::Domain {
            expr: self.to_string(),
            x,
        }
    }

    /// Exact symbolic first derivative.
    pub fn deriv(&self) -> FuncExpr {
        match self.node() {
            Node::Const(_) => Self::constant(0.0),
            Node::Identity => Self::constant(1.0),
            Node::Sum(cs) => Self::sum(cs.iter().map(FuncExpr::deriv).collect()),
            Node::Product(cs) => {
                let terms = (0..cs.len())
                    .map(|i| {
                        let factors = cs
                            .iter()
                            .enumerate()
                            .map(|(j, c)| if i == j { c.deriv() } else { c.clone() })
                            .collect();
                        Self::product(factors)
                    })
                    .collect();
                Self::sum(terms)
            }
            Node::Scale(c, f) => Self::scale(*c, f.deriv()),
            Node::Pow(base, r) => Self::scale(*r, Self::product(vec![Self::pow(base.clone(), r - 1.0), base.deriv()])),
            Node::Exp(f) => Self::product(vec![self.clone(), f.deriv()]),
            Node::Cosh(f) => Self::product(vec![Self::sinh(f.clone()), f.deriv()]),
            Node::Sinh(f) => Self::product(vec![Self::cosh(f.clone()), f.deriv()]),
            Node::Affine { scale, shift, inner } => Self::scale(*scale, inner.deriv().affine(*scale, *shift)),
        }
    }

    pub fn deriv2(&self) -> FuncExpr {
        self.deriv().deriv()
    }

    /// Bundles the expression with its first two derivatives.
    pub fn differentiated(&self) -> Differentiated {
        let d1 = self.deriv();
        let d2 = d1.deriv();
        Differentiated {
            f: self.clone(),
            d1,
            d2,
        }
    }

    fn write_at(&self, out: &mut fmt::Formatter<'_>, arg: &str) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write_number(out, *c),
            Node::Identity => out.write_str(arg),
            Node::Sum(cs) => {
                out.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.write_str(" + ")?;
                    }
                    c.write_at(out, arg)?;
                }
                out.write_str(")")
            }
            Node::Product(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.write_str("*")?;
                    }
                    c.write_at(out, arg)?;
                }
                Ok(())
            }
            Node::Scale(c, f) => {
                write_number(out, *c)?;
                out.write_str("*")?;
                f.write_at(out, arg)
            }
            Node::Pow(base, r) => {
                out.write_str("pow(")?;
                base.write_at(out, arg)?;
                out.write_str(", ")?;
                write_number(out, *r)?;
                out.write_str(")")
            }
            Node::Exp(f) | Node::Cosh(f) | Node::Sinh(f) => {
                let name = match self.node() {
                    Node::Exp(_) => "exp",
                    Node::Cosh(_) => "cosh",
                    _ => "sinh",
                };
                write!(out, "{name}(")?;
                f.write_at(out, arg)?;
                out.write_str(")")
            }
            Node::Affine { scale, shift, inner } => {
                let mut s = String::from("(");
                s.push_str(&number_string(*scale));
                s.push('*');
                s.push_str(arg);
                s.push_str(" + ");
                s.push_str(&number_string(*shift));
                s.push(')');
                inner.write_at(out, &s)
            }
        }
    }
}

fn number_string(c: f64) -> String {
    let a = c.abs();
    let body = if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{a:e}")
    } else {
        format!("{a}")
    };
    if c.is_sign_negative() && c != 0.0 {
        format!("(-{body})")
    } else {
        body
    }
}

fn write_number(out: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    out.write_str(&number_string(c))
}

/// Renders the expression in the textual grammar accepted by
/// [`parse`](crate::funcspec::parse); the output parses back to an
/// expression with identical values.
impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, "x")
    }
}

impl Add for FuncExpr {
    type Output = FuncExpr;
    fn add(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::sum(vec![self, rhs])
    }
}

impl Sub for FuncExpr {
    type Output = FuncExpr;
    fn sub(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::sum(vec![self, FuncExpr::scale(-1.0, rhs)])
    }
}

impl Mul for FuncExpr {
    type Output = FuncExpr;
    fn mul(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::product(vec![self, rhs])
    }
}

impl Mul<FuncExpr> for f64 {
    type Output = FuncExpr;
    fn mul(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::scale(self, rhs)
    }
}

impl Neg for FuncExpr {
    type Output = FuncExpr;
    fn neg(self) -> FuncExpr {
        FuncExpr::scale(-1.0, self)
    }
}

/// A real function of one variable that can be sampled pointwise.
pub trait RealFn: Send + Sync {
    fn eval(&self, x: f64) -> Result<f64>;

    /// Human-readable descriptor used in reports.
    fn describe(&self) -> String {
        String::from("<opaque>")
    }
}

/// A [`RealFn`] with first and second derivatives.
pub trait SmoothFn: RealFn {
    fn d1(&self, x: f64) -> Result<f64>;
    fn d2(&self, x: f64) -> Result<f64>;
}

impl RealFn for FuncExpr {
    fn eval(&self, x: f64) -> Result<f64> {
        FuncExpr::eval(self, x)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl<F> RealFn for F
where
    F: Fn(f64) -> Result<f64> + Send + Sync,
{
    fn eval(&self, x: f64) -> Result<f64> {
        self(x)
    }
}

/// An expression with its derivative trees built once up front.
#[derive(Debug, Clone)]
pub struct Differentiated {
    pub f: FuncExpr,
    pub d1: FuncExpr,
    pub d2: FuncExpr,
}

impl RealFn for Differentiated {
    fn eval(&self, x: f64) -> Result<f64> {
        self.f.eval(x)
    }

    fn describe(&self) -> String {
        self.f.to_string()
    }
}

impl SmoothFn for Differentiated {
    fn d1(&self, x: f64) -> Result<f64> {
        self.d1.eval(x)
    }

    fn d2(&self, x: f64) -> Result<f64> {
        self.d2.eval(x)
    }
}

/// `x^r`; domain `x > 0` unless `r` is an integer.
pub fn build_power(r: f64) -> FuncExpr {
    FuncExpr::pow(FuncExpr::x(), r)
}

/// `e^{μx}`.
pub fn build_exp(mu: f64) -> FuncExpr {
    FuncExpr::exp(FuncExpr::x()).affine(mu, 0.0)
}

/// `A cosh(px) + B sinh(px)`, the hyperbolic chord family.
pub fn build_hyperbolic(a: f64, b: f64, p: f64) -> FuncExpr {
    let c = FuncExpr::cosh(FuncExpr::x()).affine(p, 0.0);
    let s = FuncExpr::sinh(FuncExpr::x()).affine(p, 0.0);
    FuncExpr::scale(a, c) + FuncExpr::scale(b, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> FuncExpr {
        FuncExpr::x()
    }

    #[test]
    fn evaluates_basic_nodes() {
        assert_eq!(FuncExpr::cosh(x()).eval(0.0).unwrap(), 1.0);
        assert_eq!(build_power(2.0).eval(3.0).unwrap(), 9.0);
        let e2 = build_exp(2.0).eval(1.0).unwrap();
        assert!((e2 - 7.389_056_098_930_65).abs() < 1e-12);
        assert_eq!(build_hyperbolic(1.0, 0.0, 1.0).eval(0.0).unwrap(), 1.0);
        assert!((build_power(2.0).eval(2f64.sqrt()).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(build_exp(2.0).eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn non_integer_power_rejects_nonpositive_base() {
        let f = build_power(2.5);
        assert!(matches!(f.eval(0.0), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(-1.0), Err(Error::Domain { .. })));
        assert!(f.eval(1e-3).is_ok());
        // integer exponents accept any base except a pole
        assert_eq!(build_power(3.0).eval(-2.0).unwrap(), -8.0);
        assert!(build_power(-1.0).eval(0.0).is_err());
    }

    #[test]
    fn second_derivatives_of_example_families() {
        let p = 1.7;
        let h = FuncExpr::cosh(x()).affine(p, 0.0);
        let d2 = h.deriv2();
        for i in 0..=20 {
            let t = -2.0 + 0.2 * i as f64;
            let lhs = d2.eval(t).unwrap() - p * p * h.eval(t).unwrap();
            assert!(lhs.abs() < 1e-12 * (1.0 + h.eval(t).unwrap()), "{t}");
        }

        let r = 2.5;
        let f = build_power(r).deriv2();
        for t in [0.3f64, 1.0, 2.2] {
            let want = r * (r - 1.0) * t.powf(r - 2.0);
            assert!((f.eval(t).unwrap() - want).abs() < 1e-13 * want.abs());
        }

        let mu = -0.8;
        let e = build_exp(mu);
        let d2 = e.deriv2();
        for t in [-1.0, 0.0, 3.0] {
            let want = mu * mu * e.eval(t).unwrap();
            assert!((d2.eval(t).unwrap() - want).abs() < 1e-14 * want);
        }
    }

    #[test]
    fn folding_keeps_trees_small() {
        assert_eq!(FuncExpr::constant(3.0).deriv().as_constant(), Some(0.0));
        assert_eq!(x().deriv().as_constant(), Some(1.0));
        let f = FuncExpr::scale(2.0, FuncExpr::scale(3.0, x()));
        assert_eq!(f, FuncExpr::scale(6.0, x()));
        let g = FuncExpr::exp(x()).affine(2.0, 1.0).affine(3.0, -1.0);
        // exp(2(3x - 1) + 1) = exp(6x - 1)
        assert!((g.eval(0.5).unwrap() - 2f64.exp()).abs() < 1e-14);
        assert!(matches!(g.node(), Node::Affine { scale, .. } if *scale == 6.0));
    }

    #[test]
    fn linear_combination_evaluates_linearly() {
        let f1 = build_exp(0.7);
        let f2 = FuncExpr::sinh(x()).affine(1.3, -0.2);
        let combo = 2.5 * f1.clone() - 0.75 * f2.clone();
        for t in [-1.0, 0.0, 0.4, 2.0] {
            let want = 2.5 * f1.eval(t).unwrap() - 0.75 * f2.eval(t).unwrap();
            assert!((combo.eval(t).unwrap() - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(build_power(2.0).to_string(), "pow(x, 2)");
        assert_eq!(build_exp(2.0).to_string(), "exp((2*x + 0))");
        assert_eq!((x() - FuncExpr::constant(0.5)).to_string(), "(x + (-0.5))");
    }
}
