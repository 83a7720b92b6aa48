use odeinv::compare::{fixed_maps, random_affine, random_ode};
use odeinv::diff::{Calculus, Plain, Rooted};
use odeinv::expr::{equal, parse, Coord, Env, EvalError, RatFunc, Verdict};
use odeinv::ode::{pullback, PointTransformation};
use odeinv::sample::Sampler;
use odeinv::{sd, Field, Rational};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (-4i32..=4).prop_map(|n| format!("({n})")),
    ]
}

/// Small rational expressions; denominators are kept away from zero.
fn expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} / (1 + ({b})^2))")),
            (inner, 0u32..=3).prop_map(|(a, n)| format!("({a})^{n}")),
        ]
    })
}

fn rf(src: &str) -> RatFunc {
    parse(src).unwrap().normalize().unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partials_commute(a in expr()) {
        let f = rf(&a);
        prop_assert_eq!(f.partial(Coord::X).partial(Coord::Y), f.partial(Coord::Y).partial(Coord::X));
    }

    #[test]
    fn derivative_is_linear(a in expr(), b in expr(), k in -5i64..=5) {
        let (f, g) = (rf(&a), rf(&b));
        let kk = RatFunc::int(k);
        let lhs = (f.clone() * kk.clone() + g.clone()).partial(Coord::X);
        let rhs = f.partial(Coord::X) * kk + g.partial(Coord::X);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule(a in expr(), b in expr()) {
        let (f, g) = (rf(&a), rf(&b));
        let lhs = (f.clone() * g.clone()).partial(Coord::Y);
        let rhs = f.partial(Coord::Y) * g.clone() + f * g.partial(Coord::Y);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_is_idempotent(a in expr()) {
        let f = rf(&a);
        let printed = odeinv::Expr::from(&f).to_string();
        prop_assert_eq!(rf(&printed), f);
    }

    #[test]
    fn equal_agrees_with_evaluation(a in expr(), b in expr(), rewrite in any::<bool>(), seed in any::<u64>()) {
        let b = if rewrite { format!("({a}) * (x^2 + 1) / (1 + x^2) + ({b}) - ({b})") } else { b };
        let eq = equal(&parse(&a).unwrap(), &parse(&b).unwrap(), seed).unwrap();
        let (f, g) = (rf(&a), rf(&b));
        let mut s = Sampler::new(seed);
        let mut differs = false;
        for _ in 0..50 {
            let (x, y) = s.point();
            let env = Env::new(x, y);
            match (f.eval(&env), g.eval(&env)) {
                (Ok(u), Ok(v)) => differs |= u != v,
                (Err(EvalError::Pole), _) | (_, Err(EvalError::Pole)) => {}
                (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        match &eq.verdict {
            Verdict::Equal => prop_assert!(!differs),
            Verdict::NotEqual => prop_assert!(differs || !rewrite),
            v => prop_assert!(false, "unexpected verdict {v:?} on rational input"),
        }
        if rewrite {
            prop_assert_eq!(eq.verdict, Verdict::Equal);
        }
    }

    #[test]
    fn root_extension_is_a_field(a in expr(), b in expr(), i in 0i32..5) {
        let m = rf("x^2 + y^2 + 1");
        let cx = Rooted::new(Plain, m.clone()).unwrap();
        let e = cx.lift(&rf(&a)) + cx.lift(&rf(&b)) * cx.root_pow(i);
        prop_assert_eq!(cx.root().pow(5), cx.lift(&m));
        if let Some(inv) = e.inv() {
            prop_assert_eq!(e * inv, Field::from_int(1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pullback_round_trip(seed in any::<u64>(), which in 0usize..6) {
        let mut s = Sampler::new(seed);
        let ode = random_ode(&mut s, 1);
        let t = match which {
            0 => random_affine(&mut s),
            k => fixed_maps().swap_remove(k - 1).1,
        };
        let back = pullback(&pullback(&ode, &t).unwrap(), &t.inverted()).unwrap();
        prop_assert_eq!(back, ode);
    }

    #[test]
    fn pullback_respects_composition(seed in any::<u64>(), which in 0usize..5) {
        let mut s = Sampler::new(seed);
        let ode = random_ode(&mut s, 1);
        let t1 = random_affine(&mut s);
        let t2 = fixed_maps().swap_remove(which).1;
        let both = t1.then(&t2).unwrap();
        let stepwise = pullback(&pullback(&ode, &t1).unwrap(), &t2).unwrap();
        prop_assert_eq!(pullback(&ode, &both).unwrap(), stepwise);
    }

    #[test]
    fn f5_has_weight_five_under_affine_maps(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let ode = random_ode(&mut s, 2);
        let (a, b, c, d) = (s.nonzero_int(3), s.int(-3, 3), s.int(-3, 3), s.nonzero_int(3));
        prop_assume!(a * d - b * c != 0);
        let t = PointTransformation::affine(a, b, c, d, 0, 0).unwrap();
        let det = RatFunc::int(a * d - b * c);
        let old = sd::core(&Plain, &ode).f5;
        let new = sd::core(&Plain, &pullback(&ode, &t).unwrap()).f5;
        for (x, y) in [(q(0, 1), q(0, 1)), (q(1, 2), q(0, 1)), (q(0, 1), q(-1, 3)), (q(2, 5), q(1, 7))] {
            let (xt, yt) = t.apply(x.clone(), y.clone()).unwrap();
            let lhs = old.eval(&Env::new(x, y)).unwrap();
            let rhs = (new.clone() * det.pow(5)).eval(&Env::new(xt, yt)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
