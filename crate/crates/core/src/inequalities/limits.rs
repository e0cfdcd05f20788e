//! Sweeps of a hyperbolic bound towards the baseline it generalises.
//!
//! A triple is rescaled before comparison whenever the two bounds are
//! normalised differently: the fractional bounds divide by their `p = 0`
//! constant, and the `α → 1` limits of both fractional kernels sum to `2`, not
//! `1`, so D6–D9 are halved when compared against a classical weighted bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracops::Family;
use crate::funcspec::{Interval, RealFn};
use crate::special::gamma;

use super::{eval_theorem, EvalOptions, InequalityVerdict, TheoremId, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitVariable {
    /// `p → 0`
    P,
    /// `α → 1`
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitPairing {
    pub from: TheoremId,
    pub to: TheoremId,
    pub variable: LimitVariable,
}

/// The documented limit relations. `D4`/`D5` → `HH_1_1` and `D6`/`D7` →
/// `FEJER_1_2` are `p → 0` sweeps that also need `α` close to `1`.
pub fn limit_pairing(from: TheoremId, to: TheoremId) -> Option<LimitPairing> {
    use TheoremId::*;
    let variable = match (from, to) {
        (D1, HH_1_1) | (D2, FEJER_1_2) | (D4, FHH) | (D5, FHH2) | (D6, FHHF) | (D7, FHHF2) => LimitVariable::P,
        (D4 | D5, HH_1_1) | (D6 | D7, FEJER_1_2) => LimitVariable::P,
        (D8 | D9, D3) => LimitVariable::Alpha,
        _ => return None,
    };
    Some(LimitPairing { from, to, variable })
}

/// Factor applied to the `from` triple so it is comparable with the target.
fn normalization(pair: &LimitPairing, iv: Interval, alpha: Option<f64>) -> f64 {
    use TheoremId::*;
    let len = iv.len();
    match (pair.from, pair.to) {
        (D1, _) => 1.0 / len,
        (D4, _) => {
            let a = alpha.unwrap_or(1.0);
            gamma(a + 1.0) / (2.0 * len.powf(a))
        }
        (D5, _) => {
            let a = alpha.unwrap_or(1.0);
            let rho = (1.0 - a) / a * len;
            if rho == 0.0 {
                1.0 / (2.0 * len)
            } else {
                (1.0 - a) / (-2.0 * (-rho).exp_m1())
            }
        }
        (D6 | D7, FEJER_1_2) | (D8 | D9, D3) => 0.5,
        _ => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub p: f64,
    pub alpha: Option<f64>,
    /// Distance from the limit: `|p|` or `1 − α`.
    pub distance: f64,
    pub verdict: InequalityVerdict,
    /// The rescaled `from` triple.
    pub scaled: [Option<f64>; 3],
    pub target: [Option<f64>; 3],
    /// Componentwise maximum of `|scaled − target|` over the sides both carry.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSweep {
    pub pairing: LimitPairing,
    pub rows: Vec<LimitRow>,
    /// `delta` is nonincreasing as `distance` shrinks, within every group
    /// sharing the fixed parameter.
    pub monotone: bool,
    pub notes: Vec<String>,
}

impl LimitSweep {
    /// Delta of the row closest to the limit.
    pub fn final_delta(&self) -> f64 {
        self.rows
            .iter()
            .min_by(|x, y| x.distance.total_cmp(&y.distance))
            .map_or(f64::NAN, |r| r.delta)
    }
}

/// Evaluates `from` over the parameter grid and compares each row with `to`.
///
/// For a `p → 0` pairing every `(α, p)` combination is evaluated and the
/// target is evaluated once per `α`; for `α → 1` the roles swap.
#[allow(clippy::too_many_arguments)]
pub fn limit_sweep<U: RealFn + ?Sized>(
    from: TheoremId,
    to: TheoremId,
    u: &U,
    v: Option<&WeightSpec>,
    iv: Interval,
    alpha_list: &[f64],
    p_list: &[f64],
    opts: &EvalOptions,
) -> Result<LimitSweep> {
    let pairing =
        limit_pairing(from, to).ok_or_else(|| Error::invalid(format!("no documented limit takes {from} to {to}")))?;
    if p_list.is_empty() || (from.needs_alpha() && alpha_list.is_empty()) {
        return Err(Error::invalid("limit sweep needs nonempty parameter lists"));
    }
    let alphas: Vec<Option<f64>> = if from.needs_alpha() {
        alpha_list.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };

    let mut rows = Vec::new();
    let mut monotone = true;
    match pairing.variable {
        LimitVariable::P => {
            for &alpha in &alphas {
                let target = eval_theorem(to, u, v, iv, alpha, None, opts)?;
                let mut group = Vec::new();
                for &p in p_list {
                    let verdict = eval_theorem(from, u, v, iv, alpha, Some(p), opts)?;
                    group.push(row(&pairing, iv, alpha, p, p.abs(), verdict, &target));
                }
                monotone &= is_monotone(&group);
                rows.extend(group);
            }
        }
        LimitVariable::Alpha => {
            for &p in p_list {
                let target = eval_theorem(to, u, v, iv, None, Some(p), opts)?;
                let mut group = Vec::new();
                for &alpha in alpha_list {
                    let verdict = eval_theorem(from, u, v, iv, Some(alpha), Some(p), opts)?;
                    group.push(row(&pairing, iv, Some(alpha), p, (1.0 - alpha).abs(), verdict, &target));
                }
                monotone &= is_monotone(&group);
                rows.extend(group);
            }
        }
    }

    let mut notes = Vec::new();
    if from == TheoremId::D5 {
        for &alpha in &alphas {
            let a = alpha.expect("D5 needs alpha");
            let rho = (1.0 - a) / a * iv.len();
            notes.push(format!(
                "alpha = {a}: p -> 0 limit of the exponential-kernel constant is 2(1 - exp(-rho))/(1 - alpha) = {:.9}; \
                 the printed closed form 2 exp(-rho)/(1 - alpha) gives {:.9}",
                -2.0 * (-rho).exp_m1() / (1.0 - a),
                2.0 * (-rho).exp() / (1.0 - a)
            ));
        }
    }
    if pairing.variable == LimitVariable::Alpha
        || matches!((from, to), (TheoremId::D6 | TheoremId::D7, TheoremId::FEJER_1_2))
    {
        let family = from.family().unwrap_or(Family::Rl);
        notes.push(format!(
            "the {family} kernel sum tends to 2 as alpha -> 1, so the {from} triple is halved before comparison with {to}"
        ));
    }
    Ok(LimitSweep {
        pairing,
        rows,
        monotone,
        notes,
    })
}

fn row(
    pairing: &LimitPairing,
    iv: Interval,
    alpha: Option<f64>,
    p: f64,
    distance: f64,
    verdict: InequalityVerdict,
    target: &InequalityVerdict,
) -> LimitRow {
    let k = normalization(pairing, iv, alpha);
    let scaled = verdict.triple().map(|s| s.map(|x| k * x));
    let target = target.triple();
    let delta = scaled
        .iter()
        .zip(target.iter())
        .filter_map(|(s, t)| Some((s.as_ref()? - t.as_ref()?).abs()))
        .fold(0.0, f64::max);
    LimitRow {
        p,
        alpha,
        distance,
        verdict,
        scaled,
        target,
        delta,
    }
}

/// Checks that delta does not grow as the distance to the limit shrinks.
/// Deltas at rounding level (below `1e−13` relative to the target) count as
/// converged and are exempt.
fn is_monotone(group: &[LimitRow]) -> bool {
    let mut ordered: Vec<&LimitRow> = group.iter().collect();
    ordered.sort_by(|x, y| y.distance.total_cmp(&x.distance));
    ordered.windows(2).all(|w| {
        let scale = w[1].target.iter().flatten().fold(1.0f64, |m, t| m.max(t.abs()));
        w[1].delta <= w[0].delta || w[1].delta <= 1e-13 * scale
    })
}

/// Least-squares slope of `log(delta)` against `log(distance)`, i.e. the
/// observed order of convergence. Rows with zero delta or distance are skipped;
/// `None` if fewer than two remain.
pub fn decay_order(rows: &[LimitRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.delta > 0.0 && r.distance > 0.0)
        .map(|r| (r.distance.ln(), r.delta.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x / n, sy + y / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), (x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::parse;

    fn setup() -> (crate::FuncExpr, WeightSpec, Interval) {
        let u = parse("exp(2*x) + 0.5*cosh(3*(x - 0.5))").unwrap();
        let v = WeightSpec::new(parse("1 + pow(x - 0.5, 2)").unwrap());
        (u, v, Interval::new(0.0, 1.0).unwrap())
    }

    #[test]
    fn unknown_pairings_are_rejected() {
        let (u, v, iv) = setup();
        let e = limit_sweep(
            TheoremId::D4,
            TheoremId::D3,
            &u,
            Some(&v),
            iv,
            &[0.5],
            &[1e-2],
            &EvalOptions::default(),
        );
        assert!(e.is_err());
        assert!(limit_pairing(TheoremId::D8, TheoremId::D3).is_some());
    }

    #[test]
    fn d4_approaches_fhh() {
        let (u, _, iv) = setup();
        let s = limit_sweep(
            TheoremId::D4,
            TheoremId::FHH,
            &u,
            None,
            iv,
            &[0.5],
            &[1e-2, 1e-4, 1e-6],
            &EvalOptions::default(),
        )
        .unwrap();
        assert!(s.monotone, "{:?}", s.rows.iter().map(|r| r.delta).collect::<Vec<_>>());
        assert!(s.final_delta() <= 1e-5);
        let order = decay_order(&s.rows).unwrap();
        assert!((order - 2.0).abs() < 0.3, "{order}");
    }

    #[test]
    fn d8_approaches_d3() {
        let (u, v, iv) = setup();
        let s = limit_sweep(
            TheoremId::D8,
            TheoremId::D3,
            &u,
            Some(&v),
            iv,
            &[0.9, 0.99, 0.999],
            &[1.0],
            &EvalOptions::default(),
        )
        .unwrap();
        assert!(s.monotone);
        assert!(s.final_delta() < 1e-2);
        assert!(!s.notes.is_empty());
    }

    #[test]
    fn d5_sweep_reports_the_constant_note() {
        let (u, _, iv) = setup();
        let s = limit_sweep(
            TheoremId::D5,
            TheoremId::FHH2,
            &u,
            None,
            iv,
            &[0.5],
            &[1e-2, 1e-4, 1e-6],
            &EvalOptions::default(),
        )
        .unwrap();
        assert!(s.final_delta() <= 1e-5);
        assert!(s.notes[0].contains("2.528482235"), "{}", s.notes[0]);
    }

    #[test]
    fn decay_order_of_exact_power_law() {
        let (u, _, iv) = setup();
        let template = limit_sweep(
            TheoremId::D1,
            TheoremId::HH_1_1,
            &u,
            None,
            iv,
            &[],
            &[0.1],
            &EvalOptions::default(),
        )
        .unwrap()
        .rows[0]
            .clone();
        let rows: Vec<LimitRow> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&d| LimitRow {
                distance: d,
                delta: 3.0 * d * d,
                ..template.clone()
            })
            .collect();
        assert!((decay_order(&rows).unwrap() - 2.0).abs() < 1e-12);
    }
}
