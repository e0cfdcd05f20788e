//! Hermite–Hadamard and Hermite–Hadamard–Fejér type bounds as LHS/MID/RHS
//! triples, their weight constants, and limit sweeps between related bounds.
//!
//! Notation: `m = (a+b)/2`, `L = b − a`, `K(x)` is the fractional kernel
//! sum `((b−x)^{α−1} + (x−a)^{α−1})/Γ(α)` or its exponential counterpart.

mod constants;
mod limits;
mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::Family;
use crate::funcspec::{FuncExpr, Interval};
use crate::quadrature::QuadConfig;

pub use constants::{const_c, const_c1, const_c2, const_s, const_s1, const_s2, scaled_sinh_term, Kernel};
pub use limits::{decay_order, limit_pairing, limit_sweep, LimitPairing, LimitRow, LimitSweep, LimitVariable};
pub use theorems::eval_theorem;

const WEIGHT_GRID: usize = 201;
const SYMMETRY_TOL: f64 = 1e-10;

/// A positive weight `v` on `[a, b]`, optionally asserted symmetric about the midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    v: FuncExpr,
    symmetric: bool,
}

impl WeightSpec {
    /// A weight asserted symmetric; the assertion is verified against each
    /// interval it is used on.
    pub fn new(v: FuncExpr) -> Self {
        WeightSpec { v, symmetric: true }
    }

    /// A weight with no symmetry assertion; only the upper-bound theorems
    /// accept it.
    pub fn asymmetric(v: FuncExpr) -> Self {
        WeightSpec { v, symmetric: false }
    }

    pub fn unit() -> Self {
        WeightSpec::new(FuncExpr::constant(1.0))
    }

    pub fn func(&self) -> &FuncExpr {
        &self.v
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Checks positivity on a grid over `iv` and, when asserted, symmetry
    /// `|v(a+b−x) − v(x)| <= 1e−10·max(1, |v(x)|)`.
    pub fn validate(&self, iv: Interval) -> Result<()> {
        for x in iv.grid(WEIGHT_GRID) {
            let vx = self.v.eval(x)?;
            if !(vx > 0.0) || !vx.is_finite() {
                return Err(Error::InvalidWeight(format!(
                    "weight {} is not positive at x = {x} (value {vx})",
                    self.v
                )));
            }
            if self.symmetric {
                let vr = self.v.eval(iv.reflect(x))?;
                if (vr - vx).abs() > SYMMETRY_TOL * vx.abs().max(1.0) {
                    return Err(Error::InvalidWeight(format!(
                        "weight {} is not symmetric on [{}, {}]: v({x}) = {vx}, v({}) = {vr}",
                        self.v,
                        iv.a(),
                        iv.b(),
                        iv.reflect(x)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    HH_1_1,
    FEJER_1_2,
    FHH,
    FHHF,
    FHH2,
    FHHF2,
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    D8,
    D9,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::HH_1_1,
        TheoremId::FEJER_1_2,
        TheoremId::FHH,
        TheoremId::FHHF,
        TheoremId::FHH2,
        TheoremId::FHHF2,
        TheoremId::D1,
        TheoremId::D2,
        TheoremId::D3,
        TheoremId::D4,
        TheoremId::D5,
        TheoremId::D6,
        TheoremId::D7,
        TheoremId::D8,
        TheoremId::D9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::HH_1_1 => "HH_1_1",
            TheoremId::FEJER_1_2 => "FEJER_1_2",
            TheoremId::FHH => "FHH",
            TheoremId::FHHF => "FHHF",
            TheoremId::FHH2 => "FHH2",
            TheoremId::FHHF2 => "FHHF2",
            TheoremId::D1 => "D1",
            TheoremId::D2 => "D2",
            TheoremId::D3 => "D3",
            TheoremId::D4 => "D4",
            TheoremId::D5 => "D5",
            TheoremId::D6 => "D6",
            TheoremId::D7 => "D7",
            TheoremId::D8 => "D8",
            TheoremId::D9 => "D9",
        }
    }

    /// Operator family of the fractional bounds; `None` for the classical ones.
    pub fn family(self) -> Option<Family> {
        use TheoremId::*;
        match self {
            FHH | FHHF | D4 | D6 | D8 => Some(Family::Rl),
            FHH2 | FHHF2 | D5 | D7 | D9 => Some(Family::Exp),
            HH_1_1 | FEJER_1_2 | D1 | D2 | D3 => None,
        }
    }

    pub fn needs_weight(self) -> bool {
        use TheoremId::*;
        matches!(self, FEJER_1_2 | FHHF | FHHF2 | D2 | D3 | D6 | D7 | D8 | D9)
    }

    pub fn needs_p(self) -> bool {
        use TheoremId::*;
        matches!(self, D1 | D2 | D3 | D4 | D5 | D6 | D7 | D8 | D9)
    }

    pub fn needs_alpha(self) -> bool {
        self.family().is_some()
    }

    /// Bounds stated only from above: no MID side.
    pub fn upper_only(self) -> bool {
        matches!(self, TheoremId::D3 | TheoremId::D8 | TheoremId::D9)
    }

    /// Whether the weight may be asymmetric.
    pub fn accepts_asymmetric_weight(self) -> bool {
        self.upper_only()
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == key)
            .or(match key.as_str() {
                "HH" => Some(TheoremId::HH_1_1),
                "FEJER" => Some(TheoremId::FEJER_1_2),
                _ => None,
            })
            .ok_or_else(|| Error::invalid(format!("unknown theorem id {s:?}")))
    }
}

/// Which sech argument the RHS of D4/D5 uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantMode {
    /// `sech(p(b−a)/2)` on D4/D5 and `(u(b)−u(a))/2` on the sinh term of
    /// D3/D8/D9: the constants the hyperbolic chord actually produces.
    #[default]
    ProofConsistent,
    /// `sech(p(b−a))` on D4/D5 and `(u(a)−u(b))/2` on the sinh term, as written
    /// in the statements.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Absolute slack tolerance, scaled by `max(1, |rhs|)`.
    pub tol: f64,
    pub mode: ConstantMode,
    pub quad: QuadConfig,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: 1e-8,
            mode: ConstantMode::ProofConsistent,
            quad: QuadConfig::tight(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub theorem_id: TheoremId,
    pub lhs: f64,
    pub mid: Option<f64>,
    pub rhs: f64,
    /// `mid − lhs`; absent for upper-bound-only theorems.
    pub slack_left: Option<f64>,
    /// `rhs − mid`, or `rhs − lhs` when there is no MID.
    pub slack_right: f64,
    pub holds: bool,
    pub tol: f64,
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub mode: ConstantMode,
}

impl InequalityVerdict {
    /// The smaller of the two slacks.
    pub fn min_slack(&self) -> f64 {
        self.slack_left.map_or(self.slack_right, |s| s.min(self.slack_right))
    }

    pub fn triple(&self) -> [Option<f64>; 3] {
        [Some(self.lhs), self.mid, Some(self.rhs)]
    }
}
