//! `hypfrac`: fractional integrals, hyperbolic p-convexity checks, bound
//! verification, randomised campaigns and limit sweeps.
//!
//! Exit codes: 0 success, 2 usage error, 3 bound violated, 4 I/O error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypfrac_cli::campaign::{run_campaign, threads_from_env, CampaignReport, WorstCase};
use hypfrac_cli::config::{parse_list, CampaignConfig, ConfigFileError, OutputFormat};
use hypfrac_cli::fmt::{opt9, sig9};
use hypfrac_cli::report::{csv_bytes, json_string, write_file};
use hypfrac_core::convexity::{check_all, CheckOptions};
use hypfrac_core::fracops::{fractional_integral, Family, FracParams, Side};
use hypfrac_core::inequalities::{
    decay_order, eval_theorem, limit_pairing, limit_sweep, ConstantMode, EvalOptions, LimitVariable, TheoremId,
    WeightSpec,
};
use hypfrac_core::{parse, FuncExpr, Interval, QuadConfig};

enum Failure {
    Usage(String),
    Violated,
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Violated => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl From<hypfrac_core::Error> for Failure {
    fn from(e: hypfrac_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "hypfrac",
    version,
    about = "Fractional Hermite–Hadamard bounds for hyperbolic p-convex functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a fractional integral at one point.
    Integrate(IntegrateArgs),
    /// Classify a function's hyperbolic p-convexity with all four checks.
    Classify(ClassifyArgs),
    /// Evaluate one bound on one instance.
    Verify(VerifyArgs),
    /// Run the randomised campaign over every bound.
    Campaign(CampaignArgs),
    /// Sweep a bound towards one of its documented limits.
    Limits(LimitsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Rl,
    Exp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "rl")]
    family: FamilyArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long = "fn")]
    func: String,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, value_enum, default_value = "left")]
    side: SideArg,
    /// Evaluation point; defaults to `b` for the left operator and `a` for the right one.
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ClassifyArgs {
    #[arg(long = "fn")]
    func: String,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 101)]
    grid_n: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// Bound identifier, e.g. D4, FHH, HH_1_1.
    #[arg(long)]
    thm: String,
    #[arg(long = "fn")]
    func: String,
    /// Fejér weight; required by the weighted bounds.
    #[arg(long)]
    weight: Option<String>,
    /// Skip the weight symmetry check (upper bounds D3, D8, D9 only).
    #[arg(long)]
    asymmetric_weight: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Use the constants exactly as printed instead of the proof-consistent ones.
    #[arg(long)]
    printed: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct CampaignArgs {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "n")]
    n_instances: Option<String>,
    /// Comma-separated fractional orders.
    #[arg(long)]
    alphas: Option<String>,
    /// Comma-separated fixed p values (replaces the random p·(b−a) draw).
    #[arg(long)]
    p: Option<String>,
    /// Range of p·(b−a), as `lo,hi`.
    #[arg(long)]
    pl_range: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    ode_weight: Option<String>,
    /// Skip the printed-constant probe of D4/D5.
    #[arg(long)]
    no_probe: bool,
    /// Format written to `--output` (json report or csv rows).
    #[arg(long)]
    format: Option<String>,
    /// Output path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Additional CSV output path.
    #[arg(long)]
    csv_output: Option<PathBuf>,
    /// Any other configuration key, as `key=value`.
    #[arg(long = "set")]
    set: Vec<String>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct LimitsArgs {
    #[arg(long)]
    thm: String,
    #[arg(long)]
    to: String,
    #[arg(long = "fn", default_value = "exp(2*x)+0.5*cosh(3*(x-0.5))")]
    func: String,
    /// Fejér weight; defaults to 1 + (x − m)² with m the midpoint.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Comma-separated p values.
    #[arg(long)]
    p: Option<String>,
    /// Comma-separated fractional orders.
    #[arg(long)]
    alpha: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Integrate(a) => cmd_integrate(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Limits(a) => cmd_limits(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("I/O error: {m}"),
                Failure::Violated => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn parse_fn(s: &str) -> Result<FuncExpr, Failure> {
    parse(s).map_err(|e| Failure::Usage(format!("{s:?}: {e}")))
}

fn theorem(s: &str) -> Result<TheoremId, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("{e}")))
}

fn list(s: &str) -> Result<Vec<f64>, Failure> {
    let v = parse_list(s).map_err(Failure::Usage)?;
    if v.is_empty() {
        return Err(Failure::Usage(format!("empty list {s:?}")));
    }
    Ok(v)
}

fn cmd_integrate(args: IntegrateArgs) -> CliResult {
    let family = match args.family {
        FamilyArg::Rl => Family::Rl,
        FamilyArg::Exp => Family::Exp,
    };
    let params = FracParams::new(args.alpha, family)?;
    let f = parse_fn(&args.func)?;
    let iv = Interval::new(args.a, args.b)?;
    let (side, default_at) = match args.side {
        SideArg::Left => (Side::Left, iv.b()),
        SideArg::Right => (Side::Right, iv.a()),
    };
    let at = args.at.unwrap_or(default_at);
    let r = fractional_integral(&f, iv, params, side, at, &QuadConfig::tight())?;
    println!("value           {}", sig9(r.value));
    println!("error_estimate  {}", sig9(r.error_estimate));
    if !r.converged {
        eprintln!("warning: quadrature hit its subdivision limit");
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> CliResult {
    let f = parse_fn(&args.func)?.differentiated();
    let iv = Interval::new(args.a, args.b)?;
    let opts = CheckOptions {
        grid_n: args.grid_n,
        tol: args.tol,
    };
    let (reports, agree) = check_all(&f, iv, args.p, &opts)?;
    println!(
        "{:<14}{:<10}{:>18}{:>18}",
        "method", "verdict", "worst_violation", "witness_x"
    );
    for r in &reports {
        println!(
            "{:<14}{:<10}{:>18}{:>18}",
            r.method.to_string(),
            r.verdict.to_string(),
            sig9(r.worst_violation),
            sig9(r.witness_x)
        );
    }
    if agree {
        println!("verdict: {}, 4/4 methods agree", reports[0].verdict);
    } else {
        let n = reports.iter().filter(|r| r.verdict == reports[0].verdict).count();
        println!("verdict: methods disagree ({n}/4 report {})", reports[0].verdict);
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let id = theorem(&args.thm)?;
    let u = parse_fn(&args.func)?;
    let iv = Interval::new(args.a, args.b)?;
    let weight = match &args.weight {
        Some(w) if args.asymmetric_weight => Some(WeightSpec::asymmetric(parse_fn(w)?)),
        Some(w) => Some(WeightSpec::new(parse_fn(w)?)),
        None => None,
    };
    let mode = if args.printed {
        ConstantMode::AsPrinted
    } else {
        ConstantMode::ProofConsistent
    };
    let opts = EvalOptions {
        tol: args.tol,
        mode,
        ..EvalOptions::default()
    };
    let r = eval_theorem(id, &u, weight.as_ref(), iv, args.alpha, args.p, &opts)?;
    println!("theorem      {}", r.theorem_id);
    println!("lhs          {}", sig9(r.lhs));
    println!("mid          {}", opt9(r.mid));
    println!("rhs          {}", sig9(r.rhs));
    println!("slack_left   {}", opt9(r.slack_left));
    println!("slack_right  {}", sig9(r.slack_right));
    println!("holds        {}", r.holds);
    if r.holds {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn campaign_config(args: &CampaignArgs) -> Result<CampaignConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => CampaignConfig::from_file(path).map_err(|e| match e {
            ConfigFileError::Io(m) => Failure::Io(m),
            ConfigFileError::Invalid(m) => Failure::Usage(m),
        })?,
        None => CampaignConfig::default(),
    };
    let flags = [
        ("seed", &args.seed),
        ("n_instances", &args.n_instances),
        ("alphas", &args.alphas),
        ("p_list", &args.p),
        ("pl_range", &args.pl_range),
        ("tol", &args.tol),
        ("ode_weight", &args.ode_weight),
        ("format", &args.format),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v).map_err(Failure::Usage)?;
        }
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects key=value, got {kv:?}")))?;
        cfg.set(k, v).map_err(Failure::Usage)?;
    }
    if args.no_probe {
        cfg.probe = false;
    }
    if args.output.is_some() {
        cfg.output.clone_from(&args.output);
    }
    if args.csv_output.is_some() {
        cfg.csv_output.clone_from(&args.csv_output);
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn describe_worst(w: &Option<WorstCase>) -> String {
    match w {
        None => "-".into(),
        Some(w) => format!(
            "{} (instance {}, [{}, {}], p={}, alpha={})",
            sig9(w.normalized_slack),
            w.instance_index,
            sig9(w.a),
            sig9(w.b),
            opt9(w.p),
            opt9(w.alpha)
        ),
    }
}

fn summary(report: &CampaignReport) -> String {
    let mut s = format!(
        "{} instances, {} verdicts, {} violations, {} errors, {:.1} s\n",
        report.instances, report.total_verdicts, report.total_violations, report.total_errors, report.wall_time_s
    );
    s += &format!(
        "{:<10}{:>10}{:>10}{:>8}  worst normalized slack\n",
        "theorem", "evaluated", "pass", "fail"
    );
    for t in &report.theorems {
        s += &format!(
            "{:<10}{:>10}{:>10}{:>8}  {}\n",
            t.theorem_id.as_str(),
            t.evaluated,
            t.pass,
            t.fail,
            describe_worst(&t.worst)
        );
    }
    for p in &report.printed_constant_probe {
        s += &format!(
            "printed-constant probe {}: {} of {} evaluations violate the printed right-hand side; worst {}\n",
            p.theorem_id.as_str(),
            p.violations,
            p.evaluated,
            describe_worst(&p.worst)
        );
    }
    for m in &report.error_messages {
        s += &format!("error: {m}\n");
    }
    s
}

fn cmd_campaign(args: CampaignArgs) -> CliResult {
    let cfg = campaign_config(&args)?;
    let run = run_campaign(&cfg, threads_from_env()).map_err(Failure::Usage)?;
    let io = |e: &dyn std::fmt::Display, what: &str| Failure::Io(format!("{what}: {e}"));
    let csv = || csv_bytes(&run.rows).map_err(|e| io(&e, "csv"));
    let main_bytes = match cfg.format {
        OutputFormat::Json => json_string(&run.report).map_err(|e| io(&e, "json"))?.into_bytes(),
        OutputFormat::Csv => csv()?,
    };
    let text = summary(&run.report);
    match &cfg.output {
        Some(path) => {
            write_file(path, &main_bytes).map_err(|e| io(&e, &path.display().to_string()))?;
            print!("{text}");
        }
        None => {
            std::io::stdout().write_all(&main_bytes).map_err(|e| io(&e, "stdout"))?;
            eprint!("{text}");
        }
    }
    if let Some(path) = &cfg.csv_output {
        write_file(path, &csv()?).map_err(|e| io(&e, &path.display().to_string()))?;
    }
    if run.report.clean() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn cmd_limits(args: LimitsArgs) -> CliResult {
    let from = theorem(&args.thm)?;
    let to = theorem(&args.to)?;
    let pairing =
        limit_pairing(from, to).ok_or_else(|| Failure::Usage(format!("unknown limit pairing {from} -> {to}")))?;
    let iv = Interval::new(args.a, args.b)?;
    let u = parse_fn(&args.func)?;
    let weight = if from.needs_weight() || to.needs_weight() {
        let text = args
            .weight
            .clone()
            .unwrap_or_else(|| format!("1 + pow(x - {}, 2)", iv.mid()));
        Some(WeightSpec::new(parse_fn(&text)?))
    } else {
        None
    };
    let (default_p, default_alpha) = match pairing.variable {
        LimitVariable::P => ("1e-1,1e-2,1e-3,1e-4,1e-6", "0.5"),
        LimitVariable::Alpha => ("1", "0.9,0.99,0.999,0.9999"),
    };
    let ps = list(args.p.as_deref().unwrap_or(default_p))?;
    let alphas = list(args.alpha.as_deref().unwrap_or(default_alpha))?;
    let sweep = limit_sweep(from, to, &u, weight.as_ref(), iv, &alphas, &ps, &EvalOptions::default())?;

    println!(
        "{from} -> {to} as {}",
        match pairing.variable {
            LimitVariable::P => "p -> 0",
            LimitVariable::Alpha => "alpha -> 1",
        }
    );
    println!("{:>14}{:>14}{:>14}{:>18}", "p", "alpha", "distance", "|delta|");
    for r in &sweep.rows {
        println!(
            "{:>14}{:>14}{:>14}{:>18}",
            sig9(r.p),
            opt9(r.alpha),
            sig9(r.distance),
            sig9(r.delta)
        );
    }
    println!("monotone: {}", if sweep.monotone { "yes" } else { "no" });
    println!("final |delta|: {}", sig9(sweep.final_delta()));
    match decay_order(&sweep.rows) {
        Some(k) => println!("fitted decay: |delta| ~ distance^{k:.2}"),
        None => println!("fitted decay: not enough nonzero deltas to fit"),
    }
    for n in &sweep.notes {
        println!("note: {n}");
    }
    Ok(())
}
