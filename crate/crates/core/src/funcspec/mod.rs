//! Real functions of one variable as immutable expression trees with exact
//! first and second derivatives, plus the textual grammar used by the CLI.

mod expr;
mod parse;

pub use expr::{build_exp, build_hyperbolic, build_power, Differentiated, FuncExpr, Node, RealFn, SmoothFn};
pub use parse::parse;

/// Closed interval `[a, b]` with `a < b`, both finite.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> crate::Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(crate::Error::invalid(format!(
                "interval requires finite a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// `n` uniformly spaced points including both endpoints (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let h = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| if i + 1 == n { self.b } else { self.a + h * i as f64 })
            .collect()
    }

    /// The reflection `x ↦ a + b − x`.
    #[inline]
    pub fn reflect(&self, x: f64) -> f64 {
        self.a + self.b - x
    }
}
