use hypfrac_core::generator::{gen_function, gen_interval, gen_symmetric_weight, GenConfig};
use hypfrac_core::inequalities::{
    const_c1, const_s1, const_s2, eval_theorem, ConstantMode, EvalOptions, InequalityVerdict, TheoremId, WeightSpec,
};
use hypfrac_core::{parse, FuncExpr, Interval, RealFn};
use rand::Rng;

fn opts() -> EvalOptions {
    EvalOptions::default()
}

fn eval<U: RealFn + ?Sized>(
    id: TheoremId,
    u: &U,
    v: Option<&WeightSpec>,
    iv: Interval,
    alpha: Option<f64>,
    p: Option<f64>,
) -> InequalityVerdict {
    eval_theorem(id, u, v, iv, alpha, p, &opts()).unwrap()
}

fn triples_close(x: &InequalityVerdict, y: &InequalityVerdict, factor: f64, tol: f64) -> bool {
    x.triple().iter().zip(y.triple().iter()).all(|(a, b)| match (a, b) {
        (Some(a), Some(b)) => (factor * a - b).abs() <= tol * b.abs().max(1.0),
        (None, None) => true,
        _ => false,
    })
}

#[test]
fn chains_hold_on_generated_instances() {
    let cfg = GenConfig {
        seed: 11,
        ode_weight: 0.25,
        ..GenConfig::default()
    };
    for i in 0..40 {
        let mut rng = cfg.rng(i);
        let iv = gen_interval(&mut rng, &cfg);
        let p = rng.gen_range(0.05..=5.0) / iv.len();
        let u = gen_function(&mut rng, &cfg, p, iv).unwrap();
        let v = gen_symmetric_weight(&mut rng, &cfg, iv);
        let alpha = [0.3, 0.5, 0.8][i as usize % 3];
        for id in [TheoremId::D2, TheoremId::D3] {
            let r = eval(id, &u, Some(&v), iv, None, Some(p));
            assert!(r.min_slack() >= -1e-8, "{i} {id}: {r:?}");
        }
        for id in [TheoremId::D4, TheoremId::D5] {
            let r = eval(id, &u, None, iv, Some(alpha), Some(p));
            assert!(r.min_slack() >= -1e-8, "{i} {id}: {r:?}");
        }
        for id in [TheoremId::D6, TheoremId::D7, TheoremId::D8, TheoremId::D9] {
            let r = eval(id, &u, Some(&v), iv, Some(alpha), Some(p));
            assert!(r.min_slack() >= -1e-8, "{i} {id}: {r:?}");
        }
    }
}

#[test]
fn cosh_kernel_is_an_equality_case() {
    let mut rng = GenConfig::default().rng(99);
    for _ in 0..10 {
        let a = rng.gen_range(-1.0..1.0);
        let iv = Interval::new(a, a + rng.gen_range(0.2..3.0)).unwrap();
        let p = rng.gen_range(0.1..3.0);
        let alpha = rng.gen_range(0.1..0.95);
        let amp = rng.gen_range(0.2..2.0);
        let u = FuncExpr::scale(amp, FuncExpr::cosh(FuncExpr::x()).affine(p, -p * iv.mid()));
        let v = WeightSpec::new(parse("2").unwrap());
        let verdicts = [
            eval(TheoremId::D1, &u, None, iv, None, Some(p)),
            eval(TheoremId::D2, &u, Some(&v), iv, None, Some(p)),
            eval(TheoremId::D4, &u, None, iv, Some(alpha), Some(p)),
            eval(TheoremId::D5, &u, None, iv, Some(alpha), Some(p)),
        ];
        for r in verdicts {
            let mid = r.mid.unwrap();
            assert!((r.lhs - mid).abs() <= 1e-9 * mid.abs(), "{r:?}");
            assert!((r.rhs - mid).abs() <= 1e-9 * mid.abs(), "{r:?}");
        }
    }
}

#[test]
fn sinh_constants_vanish_for_symmetric_weights() {
    let cfg = GenConfig {
        seed: 5,
        ..GenConfig::default()
    };
    for i in 0..20 {
        let mut rng = cfg.rng(i);
        let iv = gen_interval(&mut rng, &cfg);
        let v = gen_symmetric_weight(&mut rng, &cfg, iv);
        let p = rng.gen_range(0.1..=5.0) / iv.len();
        let alpha = rng.gen_range(0.2..0.9);
        let c = const_c1(&v, iv, alpha, p).unwrap();
        assert!(const_s1(&v, iv, alpha, p).unwrap().abs() <= 1e-9 * c);
        assert!(const_s2(&v, iv, alpha, p).unwrap().abs() <= 1e-9 * c);
    }
}

#[test]
fn order_one_reduces_to_classical_bounds() {
    let iv = Interval::new(-0.3, 1.4).unwrap();
    let u = parse("exp(1.5*x) + cosh(2*(x - 0.2))").unwrap();
    let v = WeightSpec::new(parse("1 + pow(x - 0.55, 2)").unwrap());
    let twice_v = WeightSpec::new(FuncExpr::scale(2.0, v.func().clone()));
    let two = WeightSpec::new(FuncExpr::constant(2.0));
    let p = 1.3;

    let hh = eval(TheoremId::HH_1_1, &u, None, iv, None, None);
    assert!(triples_close(
        &eval(TheoremId::FHH, &u, None, iv, Some(1.0), None),
        &hh,
        1.0,
        1e-9
    ));

    // the kernel at order one is the constant 2
    let fejer = eval(TheoremId::FEJER_1_2, &u, Some(&v), iv, None, None);
    assert!(triples_close(
        &eval(TheoremId::FHHF, &u, Some(&v), iv, Some(1.0), None),
        &fejer,
        0.5,
        1e-9
    ));
    let d2_two = eval(TheoremId::D2, &u, Some(&two), iv, None, Some(p));
    assert!(triples_close(
        &eval(TheoremId::D4, &u, None, iv, Some(1.0), Some(p)),
        &d2_two,
        1.0,
        1e-9
    ));
    let d2 = eval(TheoremId::D2, &u, Some(&twice_v), iv, None, Some(p));
    assert!(triples_close(
        &eval(TheoremId::D6, &u, Some(&v), iv, Some(1.0), Some(p)),
        &d2,
        1.0,
        1e-9
    ));
    let d3 = eval(TheoremId::D3, &u, Some(&twice_v), iv, None, Some(p));
    assert!(triples_close(
        &eval(TheoremId::D8, &u, Some(&v), iv, Some(1.0), Some(p)),
        &d3,
        1.0,
        1e-9
    ));
}

#[test]
fn upper_bounds_with_asymmetric_weights() {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let u = parse("exp(2*x) + cosh(1.5*(x - 0.3))").unwrap();
    let w = WeightSpec::asymmetric(parse("1 + exp(x)").unwrap());
    for id in [TheoremId::D3, TheoremId::D8, TheoremId::D9] {
        let r = eval(id, &u, Some(&w), iv, Some(0.6), Some(1.0));
        assert!(r.holds, "{r:?}");
        let printed = EvalOptions {
            mode: ConstantMode::AsPrinted,
            ..opts()
        };
        let r2 = eval_theorem(id, &u, Some(&w), iv, Some(0.6), Some(1.0), &printed).unwrap();
        assert_ne!(r.rhs, r2.rhs);
    }
    assert!(eval_theorem(TheoremId::D2, &u, Some(&w), iv, None, Some(1.0), &opts()).is_err());
}

#[test]
fn verdict_serializes() {
    let u = parse("cosh(2*x)").unwrap();
    let iv = Interval::new(0.0, 1.0).unwrap();
    let r = eval(TheoremId::D4, &u, None, iv, Some(0.5), Some(1.0));
    assert!(r.holds && r.slack_left.unwrap() > 0.0 && r.slack_right > 0.0);
    let r = eval(TheoremId::D8, &u, Some(&WeightSpec::unit()), iv, Some(0.5), Some(1.0));
    assert!(r.mid.is_none());
}
