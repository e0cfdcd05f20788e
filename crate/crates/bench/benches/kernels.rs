//! Timing of the hot paths: singular-endpoint quadrature, the left
//! Riemann–Liouville operator, the chord check and one weighted bound.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hypfrac_core::convexity::{check_chord, CheckOptions};
use hypfrac_core::fracops::rl_left;
use hypfrac_core::inequalities::{eval_theorem, EvalOptions, TheoremId, WeightSpec};
use hypfrac_core::quadrature::{integrate_singular, Endpoint};
use hypfrac_core::{parse, Interval, QuadConfig};

fn quadrature(c: &mut Criterion) {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let cfg = QuadConfig::tight();
    c.bench_function("integrate_singular alpha=0.3", |b| {
        b.iter(|| integrate_singular(|x: f64| Ok(x.exp()), black_box(iv), 0.3, Endpoint::Left, &cfg).unwrap())
    });
}

fn operators(c: &mut Criterion) {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let f = parse("exp(2*x) + 0.5*cosh(3*(x - 1))").unwrap();
    c.bench_function("rl_left alpha=0.5", |b| {
        b.iter(|| rl_left(&f, black_box(iv), 0.5, 2.0).unwrap())
    });
}

fn convexity(c: &mut Criterion) {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let f = parse("exp(2*x) + 0.5*cosh(3*(x - 1))").unwrap();
    let opts = CheckOptions::default();
    c.bench_function("check_chord n=101", |b| {
        b.iter(|| check_chord(&f, black_box(iv), 1.0, &opts).unwrap())
    });
}

fn bounds(c: &mut Criterion) {
    let iv = Interval::new(0.0, 2.0).unwrap();
    let u = parse("exp(2*x) + 0.5*cosh(3*(x - 1))").unwrap();
    let v = WeightSpec::new(parse("1 + pow(x - 1, 2)").unwrap());
    let opts = EvalOptions::default();
    c.bench_function("eval_theorem D6", |b| {
        b.iter(|| eval_theorem(TheoremId::D6, &u, Some(&v), black_box(iv), Some(0.5), Some(1.0), &opts).unwrap())
    });
}

criterion_group!(benches, quadrature, operators, convexity, bounds);
criterion_main!(benches);
