//! Adaptive Gauss–Kronrod (7/15) integration on finite intervals, with a
//! power substitution for integrable algebraic endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::convert::Infallible;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::Interval;

// Gauss–Kronrod 7–15 nodes and weights, kept at their published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::invalid(
                "quadrature tolerances must be > 0 and max_subdivisions >= 1",
            ));
        }
        Ok(QuadConfig {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Near machine-precision targets, used when integrals feed inequality slacks.
    pub fn tight() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    /// False when `max_subdivisions` ran out before the tolerance was met.
    pub converged: bool,
}

/// Which endpoint carries the `(x−a)^{α−1}` / `(b−x)^{α−1}` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    Left,
    Right,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    roundoff_limited: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error; position breaks ties so the order is total
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F, E>(f: &mut F, a: f64, b: f64) -> std::result::Result<Panel, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center)?;

    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    let roundoff_limited = error <= floor;
    if roundoff_limited {
        error = floor;
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        roundoff_limited,
    })
}

/// Adaptive integration of a fallible integrand over `[a, b]`.
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate meets `max(abs_tol, rel_tol·|value|)`, the subdivision budget is
/// exhausted, or the worst panel is already at its roundoff floor.
pub fn integrate_fallible<F, E>(mut f: F, iv: Interval, cfg: &QuadConfig) -> std::result::Result<QuadResult, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    integrate_span(&mut f, iv.a(), iv.b(), cfg)
}

pub(crate) fn integrate_span<F, E>(f: &mut F, a: f64, b: f64, cfg: &QuadConfig) -> std::result::Result<QuadResult, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions_used: 0,
            converged: true,
        });
    }
    let first = gk15(f, a, b)?;
    let mut total_value = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let target = |v: f64| cfg.abs_tol.max(cfg.rel_tol * v.abs());

    let mut subdivisions = 0;
    let mut stalled = false;
    while total_error > target(total_value) && subdivisions < cfg.max_subdivisions {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.roundoff_limited || mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            stalled = true;
            break;
        }
        let left = gk15(f, worst.a, mid)?;
        let right = gk15(f, mid, worst.b)?;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // resum in position order to drop the drift of the running totals
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error_estimate: error,
        subdivisions_used: subdivisions,
        converged: error <= target(value) || stalled,
    })
}

/// Adaptive integration of `f` over `iv`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, iv: Interval, cfg: &QuadConfig) -> QuadResult {
    match integrate_fallible(|x| Ok::<_, Infallible>(f(x)), iv, cfg) {
        Ok(r) => r,
        Err(e) => match e {},
    }
}

/// Integrates `g(x)·(x−a)^{α−1}` (`Left`) or `g(x)·(b−x)^{α−1}` (`Right`).
///
/// For `α < 1` the substitution `x = a + u^{1/α}` (mirrored for `Right`)
/// turns the integral into `(1/α)∫₀^{(b−a)^α} g(a + u^{1/α}) du`, whose
/// integrand is bounded. For `α >= 1` the weight is continuous and the
/// product is integrated directly.
pub fn integrate_singular<F>(
    mut g: F,
    iv: Interval,
    alpha: f64,
    endpoint: Endpoint,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!(
            "singular weight exponent requires alpha > 0, got {alpha}"
        )));
    }
    let (a, b) = (iv.a(), iv.b());
    if alpha >= 1.0 {
        let k = alpha - 1.0;
        return integrate_fallible(
            |x| {
                let d = match endpoint {
                    Endpoint::Left => x - a,
                    Endpoint::Right => b - x,
                };
                let w = if k == 0.0 { 1.0 } else { d.max(0.0).powf(k) };
                Ok(g(x)? * w)
            },
            iv,
            cfg,
        );
    }

    let inv = 1.0 / alpha;
    let upper = iv.len().powf(alpha);
    let mut r = integrate_span(
        &mut |u: f64| {
            let d = u.powf(inv);
            let x = match endpoint {
                Endpoint::Left => (a + d).min(b),
                Endpoint::Right => (b - d).max(a),
            };
            g(x)
        },
        0.0,
        upper,
        cfg,
    )?;
    r.value *= inv;
    r.error_estimate *= inv;
    Ok(r)
}
