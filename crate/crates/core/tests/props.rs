//! Property tests for the algebraic invariants: exact field axioms,
//! specialization homomorphism, derivation rules, residue identities, and
//! parser round-trips.

use std::collections::BTreeMap;

use proptest::prelude::*;

use kn_core::density::{basis, Density, Family, HalfInt};
use kn_core::expr::{parse, CallName, Expr};
use kn_core::merofun::{Config, MeroFun, PoleMode, ZPoly};
use kn_core::scalar::{rat, rat_int, BPoly, Q2, Rational, Scalar};

fn q2_strategy() -> impl Strategy<Value = Q2> {
    ((-20i64..=20), (1i64..=6), (-6i64..=6), (1i64..=4))
        .prop_map(|(a, b, c, d)| Q2::new(rat(a, b), rat(c, d)))
}

fn bpoly_strategy(max_deg: usize) -> impl Strategy<Value = BPoly> {
    prop::collection::vec(q2_strategy(), 0..=max_deg).prop_map(BPoly::new)
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (bpoly_strategy(4), bpoly_strategy(3))
        .prop_filter_map("nonzero denominator", |(num, den)| Scalar::new(num, den).ok())
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar_strategy().prop_filter("nonzero", |s| !s.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
    }

    #[test]
    fn field_inverses(a in nonzero_scalar()) {
        let inv = a.inv().unwrap();
        prop_assert_eq!(&a * &inv, Scalar::one());
    }

    #[test]
    fn canonical_form_idempotent(a in scalar_strategy()) {
        let renorm = Scalar::new(a.num().clone(), a.den().clone()).unwrap();
        prop_assert_eq!(renorm, a);
    }

    #[test]
    fn specialization_is_a_ring_homomorphism(
        a in scalar_strategy(),
        b in scalar_strategy(),
        beta in (-7i64..=7).prop_map(rat_int),
    ) {
        // Only check where both specializations are defined.
        if let (Ok(ea), Ok(eb)) = (a.eval_beta(&beta), b.eval_beta(&beta)) {
            let sum = (&a + &b).eval_beta(&beta).unwrap();
            prop_assert_eq!(sum, &ea + &eb);
            let prod = (&a * &b).eval_beta(&beta).unwrap();
            prop_assert_eq!(prod, &ea * &eb);
        }
    }
}

fn zpoly_strategy(cfg: Config) -> impl Strategy<Value = MeroFun> {
    prop::collection::vec((-9i64..=9, 1i64..=3), 0..=4).prop_map(move |coeffs| {
        MeroFun::from_poly(
            cfg,
            ZPoly::new(
                coeffs
                    .into_iter()
                    .map(|(n, d)| Scalar::from_rational(rat(n, d)))
                    .collect(),
            ),
        )
    })
}

fn merofun_strategy(cfg: Config) -> impl Strategy<Value = MeroFun> {
    (
        zpoly_strategy(cfg),
        0u32..=3,
        0u32..=3,
        0u32..=2,
    )
        .prop_map(move |(num, e0, ea, eb)| {
            let mut den = BTreeMap::new();
            if e0 > 0 {
                den.insert(Scalar::zero(), e0);
            }
            if ea > 0 {
                den.insert(Scalar::alpha(), ea);
            }
            if eb > 0 {
                den.insert(Scalar::from_int(2), eb);
            }
            MeroFun::from_parts(cfg, PoleMode::Oracle, num.num().clone(), den)
                .expect("oracle mode accepts any poles")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivative_is_a_derivation(
        f in merofun_strategy(Config::ThreePoint),
        g in merofun_strategy(Config::ThreePoint),
    ) {
        let lhs = f.mul(&g).unwrap().derivative();
        let rhs = f
            .derivative()
            .mul(&g)
            .unwrap()
            .add(&f.mul(&g.derivative()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_residue_vanishes(f in merofun_strategy(Config::ThreePoint)) {
        prop_assert!(f.total_residue().is_zero());
    }

    #[test]
    fn cycle_integral_is_minus_residue_at_infinity(
        f in merofun_strategy(Config::ThreePoint),
    ) {
        // Restrict to the strict pole set (poles at +-al only).
        let mut den = f.pole_exponents().clone();
        den.remove(&Scalar::from_int(2));
        den.remove(&Scalar::zero());
        let g = MeroFun::from_parts(
            Config::ThreePoint,
            PoleMode::Strict,
            f.num().clone(),
            den,
        )
        .unwrap();
        let lhs = g.cycle_integral().unwrap();
        prop_assert_eq!(lhs, -&g.residue_at_infinity());
    }

    #[test]
    fn derivatives_have_zero_residues(f in merofun_strategy(Config::ThreePoint)) {
        let df = f.derivative();
        for p in df.pole_exponents().keys() {
            prop_assert!(df.residue_at(p).is_zero());
        }
        prop_assert!(df.residue_at_infinity().is_zero());
    }
}

fn three_point_indices(fam: Family) -> impl Strategy<Value = HalfInt> {
    if fam.integer_indexed() {
        (-4i64..=4).prop_map(HalfInt::int).boxed()
    } else {
        (-4i64..=3)
            .prop_map(|k| HalfInt::from_twice(2 * k + 1))
            .boxed()
    }
}

fn even_density() -> impl Strategy<Value = Density> {
    prop_oneof![
        three_point_indices(Family::G)
            .prop_map(|n| basis(Family::G, n, Config::ThreePoint).unwrap()),
        three_point_indices(Family::GDual)
            .prop_map(|n| basis(Family::GDual, n, Config::ThreePoint).unwrap()),
    ]
}

fn vector_field() -> impl Strategy<Value = Density> {
    three_point_indices(Family::V).prop_map(|n| basis(Family::V, n, Config::ThreePoint).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dot_is_associative_and_commutative_on_even_densities(
        x in even_density(),
        y in even_density(),
        z in even_density(),
    ) {
        prop_assert_eq!(x.dot(&y).unwrap(), y.dot(&x).unwrap());
        prop_assert_eq!(
            x.dot(&y).unwrap().dot(&z).unwrap(),
            x.dot(&y.dot(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn poisson_restricts_to_vector_field_bracket(
        x in vector_field(),
        y in vector_field(),
        z in vector_field(),
    ) {
        // Antisymmetry and the Jacobi identity on weight -1.
        prop_assert_eq!(x.poisson(&y).unwrap(), y.poisson(&x).unwrap().neg());
        let j = x
            .poisson(&y.poisson(&z).unwrap())
            .unwrap()
            .add(&y.poisson(&z.poisson(&x).unwrap()).unwrap())
            .unwrap()
            .add(&z.poisson(&x.poisson(&y).unwrap()).unwrap())
            .unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn grading_is_structural(x in even_density(), y in vector_field()) {
        let d = x.dot(&y).unwrap();
        prop_assert_eq!(d.weight(), x.weight().add(y.weight()));
        let p = x.poisson(&y).unwrap();
        prop_assert_eq!(p.weight(), x.weight().add(y.weight()).add(HalfInt::int(1)));
    }
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..=30, 1i64..=9).prop_map(|(n, d)| Expr::Lit(Rational::new(n.into(), d.into()))),
        Just(Expr::Alpha),
        Just(Expr::SqrtTwo),
        Just(Expr::Z),
        ((-6i64..=6)).prop_map(|n| Expr::Atom {
            family: Family::V,
            index: HalfInt::int(n)
        }),
        ((-6i64..=5)).prop_map(|k| Expr::Atom {
            family: Family::Phi,
            index: HalfInt::from_twice(2 * k + 1)
        }),
        ((-6i64..=6)).prop_map(|n| Expr::Atom {
            family: Family::GDual,
            index: HalfInt::int(n)
        }),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), -4i64..=4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Call(CallName::Bracket, vec![a, b])),
            inner
                .clone()
                .prop_map(|a| Expr::Call(CallName::C1J, vec![a])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn expr_rendering_round_trips(e in expr_strategy()) {
        let rendered = e.to_string();
        let reparsed = parse(&rendered)
            .unwrap_or_else(|err| panic!("{} failed to re-parse: {}", rendered, err));
        prop_assert_eq!(reparsed, e);
    }
}
