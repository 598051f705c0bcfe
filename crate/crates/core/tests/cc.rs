mod common;

use ccalg::algebra::BasicAlgebra;
use ccalg::catalog;
use ccalg::cc::{bq_conditions, cc_function, linear_independence};
use ccalg::grassmannian::{string_module, Method};
use ccalg::hereditary::{vectors_up_to, Hereditary};
use ccalg::laurent::LaurentPolynomial;
use ccalg::rep::{g_vector, DecoratedRepresentation, Representation};
use common::{corpora, BUDGET};
use num_bigint::BigInt;
use proptest::prelude::*;

fn poly(n: usize) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, n), -5i64..=5), 0..6).prop_map(move |terms| {
        let mut p = LaurentPolynomial::zero(n);
        for (e, c) in terms {
            p.add_term(e, &BigInt::from(c));
        }
        p
    })
}

fn lp(s: &str, n: usize) -> LaurentPolynomial {
    LaurentPolynomial::parse(s, n).unwrap()
}

#[test]
fn laurent_examples() {
    let x1 = LaurentPolynomial::variable(3, 0);
    assert_eq!(&x1 * &x1.inverse().unwrap(), LaurentPolynomial::one(3));
    let f = lp("(x2+1)*x1^-1", 2);
    assert_eq!(f.to_string(), "(x2+1)*x1^-1");
    let g = &lp("(x1+x3)*x2^-1", 3) * &LaurentPolynomial::variable(3, 1);
    assert_eq!(g, lp("x1+x3", 3));
    assert!(LaurentPolynomial::parse("x4", 3).is_err());
    assert!(LaurentPolynomial::parse("x1^", 3).is_err());
}

#[test]
fn cc_of_negative_simples_and_tail_modules() {
    let (ex, a) = corpora().into_iter().next().unwrap();
    for i in 0..3 {
        let s = DecoratedRepresentation::negative_simple(ex.quiver(), i);
        assert_eq!(cc_function(&a, &s, Method::Auto, BUDGET).unwrap(), LaurentPolynomial::variable(3, i));
    }
    let one = common::decorated(&ex, &a, "1");
    assert_eq!(cc_function(&a, &one, Method::Auto, BUDGET).unwrap().to_string(), "(x2+1)*x1^-1");
}

#[test]
fn independence_examples() {
    let fns = [lp("x2+1", 3), lp("x2", 3), lp("1", 3)];
    let r = linear_independence(&fns);
    assert!(!r.independent);
    let w = r.witness.unwrap();
    let combo = fns.iter().zip(&w).fold(LaurentPolynomial::zero(3), |acc, (f, c)| &acc + &f.scale(c));
    assert!(combo.is_zero());
    let vars: Vec<_> = (0..3).map(|i| LaurentPolynomial::variable(3, i)).collect();
    assert!(linear_independence(&vars).independent);
}

#[test]
fn rigid_tail_cc_functions_are_independent() {
    let (ex, a) = corpora().into_iter().next().unwrap();
    let fns: Vec<_> = ex
        .corpus
        .iter()
        .map(|c| c.decorated(&a).unwrap())
        .filter(|x| ccalg::rep::is_e_rigid(&a, x).unwrap())
        .map(|x| cc_function(&a, &x, Method::Auto, BUDGET).unwrap())
        .collect();
    assert_eq!(fns.len(), 12);
    assert!(linear_independence(&fns).independent);
}

#[test]
fn kronecker_cc_functions_are_separated_by_g_vectors() {
    let q = catalog::kronecker(2).unwrap();
    let a = BasicAlgebra::path_algebra(q.clone()).truncate(12).unwrap();
    assert!(bq_conditions(&q.b_matrix()).unwrap().d);
    let h = Hereditary::new(q).unwrap();
    let mut seen = std::collections::BTreeMap::new();
    for d in vectors_up_to(2, 5).into_iter().filter(|d| h.is_schur_root(d)) {
        let m = string_module(&a, &catalog::kronecker_string(&d).unwrap()).unwrap();
        let x = DecoratedRepresentation::undecorated(m);
        let g = g_vector(&a, &x).unwrap();
        let c = cc_function(&a, &x, Method::Auto, BUDGET).unwrap();
        assert_eq!(c.coefficient(&g.0), BigInt::from(1), "{d:?}");
        if let Some(prev) = seen.insert(c.to_string(), g.clone()) {
            assert_eq!(prev, g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn format_and_parse_round_trip(p in poly(3)) {
        let s = p.to_string();
        prop_assert_eq!(LaurentPolynomial::parse(&s, 3).unwrap(), p);
    }

    #[test]
    fn ring_laws(p in poly(3), q in poly(3), r in poly(3)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(p.pow(2), &p * &p);
    }

    #[test]
    fn bq_chain_holds(n in 1usize..=6, entries in prop::collection::vec(-3i64..=3, 15)) {
        let mut b = vec![vec![0i64; n]; n];
        let mut it = entries.iter().cycle();
        for i in 0..n {
            for j in i + 1..n {
                b[i][j] = *it.next().unwrap();
                b[j][i] = -b[i][j];
            }
        }
        prop_assert!(bq_conditions(&b).unwrap().chain_holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cc_is_multiplicative_and_factorizes(k in 0usize..3, i in 0usize..32, j in 0usize..32) {
        let all = corpora();
        let (ex, _) = &all[k];
        let len = ex.corpus.len();
        let a = ex.algebra.truncate(ex.stable_level().unwrap() + 1).unwrap();
        let (x, y) = (ex.corpus[i % len].decorated(&a).unwrap(), ex.corpus[j % len].decorated(&a).unwrap());
        let c = |z: &DecoratedRepresentation| cc_function(&a, z, Method::Coordinate, BUDGET).unwrap();
        let sum = x.direct_sum(&y);
        let cs = c(&sum);
        prop_assert_eq!(&cs, &(&c(&x) * &c(&y)));
        let module = DecoratedRepresentation::undecorated(sum.module.clone());
        let deco = DecoratedRepresentation::new(Representation::zero(a.quiver()).with_strings(vec![]), sum.decoration.clone()).unwrap();
        prop_assert_eq!(&cs, &(&c(&module) * &c(&deco)));
        let g = g_vector(&a, &module).unwrap();
        prop_assert!(c(&module).coefficient(&g.0) >= BigInt::from(1));
    }
}
