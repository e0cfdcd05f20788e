//! Randomised campaign over every bound.
//!
//! Each instance draws an interval, a p-convex function and a symmetric
//! weight from its own random stream, then evaluates every bound on a grid of
//! `(α, p)` cells:
//!
//! - `HH_1_1`, `FEJER_1_2`: once per instance;
//! - `FHH`, `FHHF`: every `α`; `FHH2`, `FHHF2`: every `α < 1`;
//! - `D1`–`D3`: every p cell;
//! - `D4`, `D6`, `D8`: every `(α, p)`; `D5`, `D7`, `D9`: every `(α < 1, p)`.
//!
//! Without an explicit p list there is one p cell per instance with
//! `p·(b−a)` drawn from `pl_range`. Functions are generated for the largest
//! `|p|` of the instance, which makes them p-convex for every smaller `|p|`
//! too because they are positive.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use hypfrac_core::generator::{gen_function, gen_interval, gen_symmetric_weight, GeneratedFn};
use hypfrac_core::inequalities::{eval_theorem, ConstantMode, EvalOptions, InequalityVerdict, TheoremId, WeightSpec};
use hypfrac_core::{Interval, RealFn};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::CampaignConfig;

/// One evaluated bound, as written to the CSV report.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub verdict: InequalityVerdict,
    pub fn_descriptor: Arc<str>,
    pub weight_descriptor: Option<Arc<str>>,
    pub seed: u64,
    pub instance_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    /// `min(slack_left, slack_right) / max(1, |rhs|)`.
    pub normalized_slack: f64,
    pub slack: f64,
    pub instance_index: u64,
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    pub lhs: f64,
    pub mid: Option<f64>,
    pub rhs: f64,
    pub fn_descriptor: String,
    pub weight_descriptor: Option<String>,
}

impl WorstCase {
    fn of(row: &Row) -> Self {
        let v = &row.verdict;
        WorstCase {
            normalized_slack: normalized(v),
            slack: v.min_slack(),
            instance_index: row.instance_index,
            a: v.a,
            b: v.b,
            p: v.p,
            alpha: v.alpha,
            lhs: v.lhs,
            mid: v.mid,
            rhs: v.rhs,
            fn_descriptor: row.fn_descriptor.to_string(),
            weight_descriptor: row.weight_descriptor.as_ref().map(|w| w.to_string()),
        }
    }
}

fn normalized(v: &InequalityVerdict) -> f64 {
    v.min_slack() / v.rhs.abs().max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub theorem_id: TheoremId,
    pub cells_per_instance: usize,
    pub evaluated: usize,
    pub pass: usize,
    pub fail: usize,
    pub errors: usize,
    pub worst: Option<WorstCase>,
}

/// D4/D5 evaluated with the printed `sech(p(b−a))` right-hand constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub theorem_id: TheoremId,
    pub evaluated: usize,
    pub violations: usize,
    pub worst: Option<WorstCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub artifact: String,
    pub version: String,
    pub config: CampaignConfig,
    pub wall_time_s: f64,
    pub instances: usize,
    pub total_verdicts: usize,
    pub total_violations: usize,
    pub total_errors: usize,
    pub theorems: Vec<TheoremSummary>,
    pub printed_constant_probe: Vec<ProbeSummary>,
    /// First few evaluation errors, if any.
    pub error_messages: Vec<String>,
}

impl CampaignReport {
    pub fn clean(&self) -> bool {
        self.total_violations == 0 && self.total_errors == 0
    }
}

pub struct CampaignRun {
    pub report: CampaignReport,
    /// Ordered by theorem, then instance index, then cell.
    pub rows: Vec<Row>,
}

struct Outcome {
    rows: Vec<Row>,
    errors: Vec<(TheoremId, String)>,
    probe: Vec<Row>,
}

struct Instance<'a> {
    cfg: &'a CampaignConfig,
    index: u64,
    iv: Interval,
    u: GeneratedFn,
    v: WeightSpec,
    fn_desc: Arc<str>,
    w_desc: Arc<str>,
    opts: EvalOptions,
    out: Outcome,
}

impl Instance<'_> {
    fn eval(&mut self, id: TheoremId, alpha: Option<f64>, p: Option<f64>, mode: ConstantMode) {
        let v = id.needs_weight().then_some(&self.v);
        let opts = EvalOptions { mode, ..self.opts };
        match eval_theorem(id, &self.u, v, self.iv, alpha, p, &opts) {
            Ok(verdict) => {
                let row = Row {
                    verdict,
                    fn_descriptor: self.fn_desc.clone(),
                    weight_descriptor: v.map(|_| self.w_desc.clone()),
                    seed: self.cfg.seed,
                    instance_index: self.index,
                };
                match mode {
                    ConstantMode::ProofConsistent => self.out.rows.push(row),
                    ConstantMode::AsPrinted => self.out.probe.push(row),
                }
            }
            Err(e) => self
                .out
                .errors
                .push((id, format!("instance {}: {id}: {e}", self.index))),
        }
    }
}

fn p_cells(cfg: &CampaignConfig, rng: &mut impl Rng, iv: Interval) -> Vec<f64> {
    match &cfg.p_list {
        Some(ps) => ps.clone(),
        None => {
            let (lo, hi) = cfg.pl_range;
            let pl = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
            vec![pl / iv.len()]
        }
    }
}

fn run_instance(cfg: &CampaignConfig, index: u64) -> Outcome {
    let gen = cfg.gen_config();
    let mut rng = gen.rng(index);
    let iv = gen_interval(&mut rng, &gen);
    let ps = p_cells(cfg, &mut rng, iv);
    let pmax = ps.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    let empty = Outcome {
        rows: Vec::new(),
        errors: Vec::new(),
        probe: Vec::new(),
    };
    let u = match gen_function(&mut rng, &gen, pmax, iv) {
        Ok(u) => u,
        Err(e) => {
            let mut out = empty;
            out.errors
                .push((TheoremId::HH_1_1, format!("instance {index}: generation failed: {e}")));
            return out;
        }
    };
    let v = gen_symmetric_weight(&mut rng, &gen, iv);
    let opts = EvalOptions {
        tol: cfg.tol + u.error_budget(),
        ..EvalOptions::default()
    };
    let mut inst = Instance {
        cfg,
        index,
        iv,
        fn_desc: u.describe().into(),
        w_desc: v.func().to_string().into(),
        u,
        v,
        opts,
        out: empty,
    };
    let proof = ConstantMode::ProofConsistent;
    let exp_alphas: Vec<f64> = cfg.alphas.iter().copied().filter(|a| *a < 1.0).collect();

    inst.eval(TheoremId::HH_1_1, None, None, proof);
    inst.eval(TheoremId::FEJER_1_2, None, None, proof);
    for &a in &cfg.alphas {
        inst.eval(TheoremId::FHH, Some(a), None, proof);
        inst.eval(TheoremId::FHHF, Some(a), None, proof);
    }
    for &a in &exp_alphas {
        inst.eval(TheoremId::FHH2, Some(a), None, proof);
        inst.eval(TheoremId::FHHF2, Some(a), None, proof);
    }
    for &p in &ps {
        for id in [TheoremId::D1, TheoremId::D2, TheoremId::D3] {
            inst.eval(id, None, Some(p), proof);
        }
        for &a in &cfg.alphas {
            for id in [TheoremId::D4, TheoremId::D6, TheoremId::D8] {
                inst.eval(id, Some(a), Some(p), proof);
            }
            if cfg.probe {
                inst.eval(TheoremId::D4, Some(a), Some(p), ConstantMode::AsPrinted);
            }
        }
        for &a in &exp_alphas {
            for id in [TheoremId::D5, TheoremId::D7, TheoremId::D9] {
                inst.eval(id, Some(a), Some(p), proof);
            }
            if cfg.probe {
                inst.eval(TheoremId::D5, Some(a), Some(p), ConstantMode::AsPrinted);
            }
        }
    }
    inst.out
}

/// Grid cells each theorem occupies per instance.
pub fn cells_per_instance(cfg: &CampaignConfig, id: TheoremId) -> usize {
    use TheoremId::*;
    let n_alpha = cfg.alphas.len();
    let n_exp = cfg.alphas.iter().filter(|a| **a < 1.0).count();
    let n_p = cfg.p_list.as_ref().map_or(1, Vec::len);
    match id {
        HH_1_1 | FEJER_1_2 => 1,
        FHH | FHHF => n_alpha,
        FHH2 | FHHF2 => n_exp,
        D1 | D2 | D3 => n_p,
        D4 | D6 | D8 => n_alpha * n_p,
        D5 | D7 | D9 => n_exp * n_p,
    }
}

fn worst_of<'a>(rows: impl Iterator<Item = &'a Row>) -> Option<WorstCase> {
    rows.min_by(|x, y| normalized(&x.verdict).total_cmp(&normalized(&y.verdict)))
        .map(WorstCase::of)
}

/// Runs the campaign on `threads` workers (all available when `None`).
pub fn run_campaign(cfg: &CampaignConfig, threads: Option<usize>) -> Result<CampaignRun, String> {
    cfg.validate()?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| format!("cannot start worker pool: {e}"))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        (0..cfg.n_instances as u64)
            .into_par_iter()
            .map(|i| run_instance(cfg, i))
            .collect()
    });

    let mut by_theorem: BTreeMap<TheoremId, Vec<Row>> = BTreeMap::new();
    let mut probe_rows: BTreeMap<TheoremId, Vec<Row>> = BTreeMap::new();
    let mut errors: BTreeMap<TheoremId, usize> = BTreeMap::new();
    let mut error_messages = Vec::new();
    for out in outcomes {
        for row in out.rows {
            by_theorem.entry(row.verdict.theorem_id).or_default().push(row);
        }
        for row in out.probe {
            probe_rows.entry(row.verdict.theorem_id).or_default().push(row);
        }
        for (id, msg) in out.errors {
            *errors.entry(id).or_default() += 1;
            if error_messages.len() < 20 {
                error_messages.push(msg);
            }
        }
    }

    let theorems: Vec<TheoremSummary> = TheoremId::ALL
        .iter()
        .map(|&id| {
            let rows = by_theorem.get(&id).map_or(&[][..], Vec::as_slice);
            let errs = errors.get(&id).copied().unwrap_or(0);
            let pass = rows.iter().filter(|r| r.verdict.holds).count();
            TheoremSummary {
                theorem_id: id,
                cells_per_instance: cells_per_instance(cfg, id),
                evaluated: rows.len() + errs,
                pass,
                fail: rows.len() - pass + errs,
                errors: errs,
                worst: worst_of(rows.iter()),
            }
        })
        .collect();
    let printed_constant_probe = if cfg.probe {
        [TheoremId::D4, TheoremId::D5]
            .iter()
            .map(|&id| {
                let rows = probe_rows.get(&id).map_or(&[][..], Vec::as_slice);
                ProbeSummary {
                    theorem_id: id,
                    evaluated: rows.len(),
                    violations: rows.iter().filter(|r| !r.verdict.holds).count(),
                    worst: worst_of(rows.iter()),
                }
            })
            .collect()
    } else {
        Vec::new()
    };

    let total_errors = errors.values().sum();
    let report = CampaignReport {
        artifact: "hypfrac".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        instances: cfg.n_instances,
        total_verdicts: theorems.iter().map(|t| t.evaluated).sum(),
        total_violations: theorems.iter().map(|t| t.fail).sum(),
        total_errors,
        theorems,
        printed_constant_probe,
        error_messages,
    };
    let rows = by_theorem.into_values().flatten().collect();
    Ok(CampaignRun { report, rows })
}

/// Worker count from `HYPFRAC_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("HYPFRAC_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CampaignConfig {
        CampaignConfig {
            n_instances: 3,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn counts_match_the_grid() {
        let cfg = small();
        let run = run_campaign(&cfg, Some(2)).unwrap();
        for t in &run.report.theorems {
            assert_eq!(
                t.pass + t.fail,
                cfg.n_instances * t.cells_per_instance,
                "{:?}",
                t.theorem_id
            );
        }
        assert_eq!(run.rows.len(), run.report.total_verdicts);
        assert!(run.report.clean(), "{:?}", run.report.error_messages);
    }

    #[test]
    fn rows_are_ordered_by_theorem_then_instance() {
        let run = run_campaign(&small(), Some(3)).unwrap();
        let keys: Vec<(TheoremId, u64)> = run
            .rows
            .iter()
            .map(|r| (r.verdict.theorem_id, r.instance_index))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn explicit_p_list_multiplies_cells() {
        let cfg = CampaignConfig {
            p_list: Some(vec![0.5, 2.0]),
            alphas: vec![0.5, 1.5],
            ..small()
        };
        assert_eq!(cells_per_instance(&cfg, TheoremId::D4), 4);
        assert_eq!(cells_per_instance(&cfg, TheoremId::D5), 2);
        let run = run_campaign(&cfg, Some(1)).unwrap();
        let d5 = run
            .report
            .theorems
            .iter()
            .find(|t| t.theorem_id == TheoremId::D5)
            .unwrap();
        assert_eq!(d5.evaluated, 6);
    }
}
