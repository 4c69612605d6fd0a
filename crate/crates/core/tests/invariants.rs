use nse_symmetry::expr::{int, parse, rat, Expr, PointSampler, SampleDomain, Symbol, Var, ZeroTest};
use nse_symmetry::exterior::{max_terms, KForm};
use nse_symmetry::symmetry::{catalog, covariance_factor, finite_rotation, finite_scaling};
use nse_symmetry::weights::{classify, energy_scaling_exponent, weight_of, Criticality, ScalingExponents};
use num_traits::Signed;
use proptest::prelude::*;

fn zero_test() -> ZeroTest {
    ZeroTest::new().points(15).domain(SampleDomain::Positive)
}

fn var() -> impl Strategy<Value = Var> {
    (0usize..8).prop_map(|i| Var::ALL[i])
}

fn positive_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec![Var::X, Var::Y, Var::Z, Var::T, Var::U, Var::P]).prop_map(Expr::var),
        1 => (1i64..5).prop_map(Expr::from),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (Expr::one() + &b * &b)),
            (inner.clone(), -2i64..4).prop_map(|(a, n)| a.powi(n)),
            inner.clone().prop_map(|a| a.sqrt()),
        ]
    })
}

fn monomial() -> impl Strategy<Value = Expr> {
    (1i64..6, prop::collection::vec(-2i64..3, 9)).prop_map(|(c, ex)| {
        let syms = Var::ALL.iter().map(|v| v.symbol()).chain([Symbol::nu()]);
        syms.zip(ex).fold(Expr::from(c), |m, (s, e)| m * Expr::sym(s).powi(e))
    })
}

fn polynomial() -> impl Strategy<Value = Expr> {
    prop::collection::vec((-3i64..4, prop::collection::vec(0i64..3, 8)), 1..4).prop_map(|terms| {
        Expr::sum(terms.into_iter().map(|(c, ex)| {
            Var::ALL.iter().zip(ex).fold(Expr::from(c), |m, (v, e)| m * Expr::var(*v).powi(e))
        }))
    })
}

fn form(max_degree: usize) -> impl Strategy<Value = KForm> {
    (0..=max_degree).prop_flat_map(|k| {
        prop::collection::vec((prop::sample::subsequence(Var::ALL.to_vec(), k), polynomial()), 1..4)
            .prop_map(move |terms| terms.into_iter().fold(KForm::zero(k), |f, (vs, c)| f + KForm::term(c, &vs)))
    })
}

fn generator() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["T", "X", "X1", "X2", "Rx", "Ry", "Rz"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(w in form(6)) {
        prop_assert!(w.d().d().is_zero(&zero_test()));
    }

    #[test]
    fn term_count_is_bounded(w in form(8), v in var()) {
        let dw = w.wedge(&KForm::differential(v));
        prop_assert!(w.len() <= max_terms(w.degree()));
        prop_assert!(dw.len() <= max_terms(dw.degree()));
    }

    #[test]
    fn lie_derivative_obeys_leibniz(a in form(3), b in form(3), g in generator()) {
        let g = catalog().get(g).unwrap();
        let lhs = a.wedge(&b).lie(g);
        let rhs = a.lie(g).wedge(&b) + a.wedge(&b.lie(g));
        prop_assert!(lhs.equivalent(&rhs, &zero_test()));
    }

    #[test]
    fn lie_commutes_with_d(w in form(4), g in generator()) {
        let g = catalog().get(g).unwrap();
        prop_assert!(w.d().lie(g).equivalent(&w.lie(g).d(), &zero_test()));
    }

    #[test]
    fn pullback_commutes_with_d(w in form(4), which in 0usize..3) {
        let phi = match which {
            0 => finite_scaling(&int(1), &int(2), &Symbol::k()),
            1 => finite_scaling(&rat(-1, 2), &rat(3, 4), &Symbol::k()),
            _ => finite_rotation(Var::Y),
        };
        prop_assert!(w.d().pullback(&phi).equivalent(&w.pullback(&phi).d(), &zero_test()));
    }

    #[test]
    fn derivative_matches_central_difference(e in positive_expr(), v in prop::sample::select(vec![Var::X, Var::T, Var::U, Var::P]), seed in any::<u64>()) {
        let syms: Vec<Symbol> = [Var::X, Var::Y, Var::Z, Var::T, Var::U, Var::P].iter().map(|v| v.symbol()).collect();
        let pt = PointSampler::new(seed, SampleDomain::Positive).sample(&syms);
        let s = v.symbol();
        let x0 = pt[&s];
        let h = 1e-5 * x0;
        let at = |x: f64| { let mut p = pt.clone(); p.insert(s.clone(), x); e.eval(&p).unwrap() };
        let fd = (at(x0 + h) - at(x0 - h)) / (2.0 * h);
        let exact = e.diff(&s).eval(&pt).unwrap();
        prop_assert!((exact - fd).abs() <= 1e-6 * (exact.abs() + at(x0).abs() / x0 + 1.0), "{e}: {exact} vs {fd}");
    }

    #[test]
    fn printing_round_trips(e in positive_expr()) {
        let back = parse(&e.to_string()).unwrap();
        prop_assert!(zero_test().check(&(back - &e)).is_zero());
    }

    #[test]
    fn weights_add_over_products(f in monomial(), g in monomial()) {
        let wf = weight_of(&f).unwrap().unwrap();
        let wg = weight_of(&g).unwrap().unwrap();
        prop_assert_eq!(weight_of(&(&f * &g)).unwrap().unwrap(), wf + wg);
    }

    #[test]
    fn verdict_depends_only_on_the_ray(ax in -6i64..7, at in -6i64..7, c in 1i64..9, d in 1i64..5) {
        prop_assume!(ax != 0 || at != 0);
        let s = ScalingExponents::ints(ax, at);
        let scaled = ScalingExponents::new(int(ax) * rat(c, d), int(at) * rat(c, d));
        let v = classify(&s).unwrap();
        prop_assert_eq!(v.verdict, classify(&scaled).unwrap().verdict);
        let e = energy_scaling_exponent(&s);
        let by_sign = if e.is_positive() { Criticality::Supercritical } else if e.is_negative() { Criticality::Subcritical } else { Criticality::Critical };
        prop_assert_eq!(v.verdict, by_sign);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_predicts_scaling_factor(f in monomial(), ax in -3i64..4, at in -3i64..4, q in 1i64..4) {
        prop_assume!(ax != 0 || at != 0);
        let (ax, at) = (rat(ax, q), int(at));
        let w = weight_of(&f).unwrap().unwrap();
        let r = covariance_factor(&f, &finite_scaling(&ax, &at, &Symbol::k())).unwrap();
        prop_assert_eq!(r.exponent().unwrap(), &w.a * &ax + &w.b * &at);
    }
}
