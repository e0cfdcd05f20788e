use hypfrac_core::{parse, FuncExpr, Interval};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = FuncExpr> {
    prop_oneof![(-2.0..2.0f64).prop_map(FuncExpr::constant), Just(FuncExpr::x()),]
}

/// Expressions that stay moderate on [-1, 1].
fn arb_expr() -> impl Strategy<Value = FuncExpr> {
    leaf().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(FuncExpr::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(FuncExpr::product),
            ((-2.0..2.0f64), inner.clone()).prop_map(|(c, f)| FuncExpr::scale(c, f)),
            (inner.clone(), 2..4i32).prop_map(|(f, k)| FuncExpr::pow(f, k as f64)),
            inner.clone().prop_map(|f| FuncExpr::exp(FuncExpr::scale(0.5, f))),
            inner.clone().prop_map(|f| FuncExpr::cosh(FuncExpr::scale(0.5, f))),
            inner.clone().prop_map(|f| FuncExpr::sinh(FuncExpr::scale(0.5, f))),
            ((0.2..1.5f64), (-0.5..0.5f64), inner).prop_map(|(s, t, f)| f.affine(s, t)),
        ]
    })
}

fn grid() -> Vec<f64> {
    Interval::new(-1.0, 1.0).unwrap().grid(101)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivatives_match_central_differences(f in arb_expr()) {
        let d = f.differentiated();
        let h = 1e-5;
        for x in grid() {
            let (lo, hi) = (f.eval(x - h).unwrap(), f.eval(x + h).unwrap());
            prop_assume!(lo.abs() < 1e4 && hi.abs() < 1e4);
            let fd = (hi - lo) / (2.0 * h);
            let exact = d.d1.eval(x).unwrap();
            prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "f = {f}, x = {x}: {fd} vs {exact}");

            let (dlo, dhi) = (d.d1.eval(x - h).unwrap(), d.d1.eval(x + h).unwrap());
            let fd2 = (dhi - dlo) / (2.0 * h);
            let exact2 = d.d2.eval(x).unwrap();
            prop_assert!((fd2 - exact2).abs() <= 1e-6 * (1.0 + exact2.abs()), "f = {f}, x = {x}: {fd2} vs {exact2}");
        }
    }

    #[test]
    fn evaluation_and_differentiation_are_linear(f in arb_expr(), g in arb_expr(), c in -3.0..3.0f64) {
        let combo = f.clone() + FuncExpr::scale(c, g.clone());
        let (df, dg, dc) = (f.deriv(), g.deriv(), combo.deriv());
        for x in grid() {
            let want = f.eval(x).unwrap() + c * g.eval(x).unwrap();
            let got = combo.eval(x).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
            let want = df.eval(x).unwrap() + c * dg.eval(x).unwrap();
            let got = dc.eval(x).unwrap();
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn display_parses_back_to_the_same_function(f in arb_expr()) {
        let text = f.to_string();
        let g = parse(&text).unwrap();
        for x in grid() {
            let (a, b) = (f.eval(x).unwrap(), g.eval(x).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{text}: {a} vs {b}");
        }
        prop_assert_eq!(g.to_string(), parse(&g.to_string()).unwrap().to_string());
    }
}

#[test]
fn grammar_examples() {
    let f = parse("exp(2*x) + 0.5*cosh(3*(x-0.5))").unwrap();
    let want = (2.0f64 * 0.3).exp() + 0.5 * (3.0f64 * (0.3 - 0.5)).cosh();
    assert!((f.eval(0.3).unwrap() - want).abs() < 1e-15);
    let g = parse("sqrt(x) + x^3 - 2/x").unwrap();
    let want = 2f64.sqrt() + 8.0 - 1.0;
    assert!((g.eval(2.0).unwrap() - want).abs() < 1e-14);
    assert!(parse("pow(x, y)").is_err());
    assert!(parse("cosh(").is_err());
    assert!(parse("").is_err());
}
