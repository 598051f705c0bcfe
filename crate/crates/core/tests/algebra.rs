mod common;

use std::collections::BTreeMap;

use ccalg::algebra::{stable_truncation_level, BasicAlgebra, RelationSet, TruncatedAlgebra};
use ccalg::catalog;
use ccalg::linalg::{rat, Rational};
use ccalg::quiver::{PathCombination, Quiver};
use num_traits::Zero;
use proptest::prelude::*;

/// Relations built from a random choice of paths of length 2 or 3, one
/// generator per pair of endpoints.
fn algebra(q: Quiver, picks: &[(bool, i64)]) -> BasicAlgebra {
    let candidates: Vec<_> = q.enumerate_paths(3).into_iter().filter(|p| p.len() >= 2).collect();
    let mut groups: BTreeMap<(usize, usize), Vec<(Rational, _)>> = BTreeMap::new();
    for (p, &(take, c)) in candidates.into_iter().zip(picks.iter().cycle()) {
        if take && c != 0 {
            groups.entry((p.start(), p.end())).or_default().push((rat(c), p));
        }
    }
    let gens = groups.into_values().map(|t| PathCombination::new(t).unwrap()).filter(|c| !c.is_zero()).collect();
    BasicAlgebra::new(q, RelationSet::new(gens).unwrap())
}

fn arb_algebra() -> impl Strategy<Value = BasicAlgebra> {
    (common::quiver(3, 4), prop::collection::vec((any::<bool>(), -2i64..=2), 1..12)).prop_map(|(q, p)| algebra(q, &p))
}

fn sparse(v: Vec<(usize, Rational)>) -> BTreeMap<usize, Rational> {
    let mut out = BTreeMap::new();
    for (k, c) in v {
        *out.entry(k).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn multiply(a: &TruncatedAlgebra, x: &BTreeMap<usize, Rational>, y: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
    let mut out = Vec::new();
    for (i, ci) in x {
        for (j, cj) in y {
            out.extend(a.mul_basis(*i, *j).into_iter().map(|(k, c)| (k, c * ci * cj)));
        }
    }
    sparse(out)
}

#[test]
fn tail_algebra_basis_and_modules() {
    let ex = catalog::tail_with_loop().unwrap();
    let a = ex.algebra.truncate(4).unwrap();
    assert_eq!(a.dim(), 9);
    assert_eq!(a.basis_names(), ["e1", "e2", "e3", "a", "b", "c", "ba", "cb", "cba"]);
    assert_eq!(a.projective(2).dims(), [0, 0, 2]);
    assert_eq!(a.projective(0).dims(), [1, 1, 2]);
    assert_eq!(a.injective(0).dims(), [1, 0, 0]);
    assert_eq!(a.injective(2).dims(), [2, 2, 2]);
}

#[test]
fn injective_of_a_free_loop_is_a_jordan_block() {
    let ex = catalog::jordan_loop(4).unwrap();
    for p in 2..=4 {
        let a = ex.algebra.truncate(p).unwrap();
        let i = a.injective(0);
        assert_eq!(i.dims(), [p]);
        assert_eq!(i.map(0).rank(), p - 1);
    }
}

#[test]
fn sinks_have_simple_projectives() {
    let a = BasicAlgebra::path_algebra(catalog::a3().unwrap()).truncate(2).unwrap();
    assert_eq!(a.dim(), 5);
    assert_eq!(a.projective(2).dims(), [0, 0, 1]);
}

#[test]
fn stable_levels() {
    assert_eq!(stable_truncation_level(&[2]), 3);
    assert_eq!(stable_truncation_level(&[3, 3]), 7);
    assert_eq!(stable_truncation_level(&[]), 2);
    assert!(BasicAlgebra::path_algebra(catalog::a2().unwrap()).truncate(1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimension_is_sum_of_projectives_and_injectives(alg in arb_algebra(), p in 2usize..5) {
        let a = alg.truncate(p).unwrap();
        let proj: usize = (0..a.n()).map(|i| a.projective(i).total_dim()).sum();
        let inj: usize = (0..a.n()).map(|i| a.injective(i).total_dim()).sum();
        prop_assert_eq!(proj, a.dim());
        prop_assert_eq!(inj, a.dim());
        for i in 0..a.n() {
            let soc = ccalg::rep::socle(a.quiver(), &a.injective(i));
            let mut unit = vec![0; a.n()];
            unit[i] = 1;
            prop_assert_eq!(soc, unit);
        }
    }

    #[test]
    fn dimension_grows_with_the_level(alg in arb_algebra(), p in 2usize..5) {
        let low = alg.truncate(p).unwrap();
        let high = alg.truncate(p + 1).unwrap();
        prop_assert!(low.dim() <= high.dim());
        if low.is_saturated() {
            prop_assert_eq!(low.dim(), high.dim());
        }
        prop_assert!(low.basis().iter().all(|b| b.len() < p));
        prop_assert!((0..low.n()).all(|i| low.basis().iter().any(|b| b.is_trivial() && b.start() == i)));
    }

    #[test]
    fn reduction_is_idempotent(alg in arb_algebra(), p in 2usize..5) {
        let a = alg.truncate(p).unwrap();
        for path in a.quiver().enumerate_paths(p - 1) {
            let once: BTreeMap<usize, Rational> = sparse(a.reduce_path(&path));
            let as_paths: Vec<(Rational, _)> = once.iter().map(|(k, c)| (c.clone(), a.basis_path(*k).clone())).collect();
            if as_paths.is_empty() {
                continue;
            }
            let twice = a.reduce(&PathCombination::new(as_paths).unwrap());
            prop_assert_eq!(once, twice);
        }
        for k in 0..a.dim() {
            prop_assert_eq!(sparse(a.reduce_path(a.basis_path(k))), BTreeMap::from([(k, rat(1))]));
        }
    }

    #[test]
    fn multiplication_is_associative(alg in arb_algebra(), p in 2usize..5) {
        let a = alg.truncate(p).unwrap();
        prop_assume!(a.dim() <= 12);
        let unit = |k: usize| BTreeMap::from([(k, rat(1))]);
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                let xy = sparse(a.mul_basis(x, y));
                for z in 0..a.dim() {
                    let left = multiply(&a, &xy, &unit(z));
                    let right = multiply(&a, &unit(x), &sparse(a.mul_basis(y, z)));
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn long_products_vanish(alg in arb_algebra(), p in 2usize..5) {
        let a = alg.truncate(p).unwrap();
        for x in 0..a.dim() {
            for y in 0..a.dim() {
                if a.basis_path(x).len() + a.basis_path(y).len() >= p {
                    prop_assert!(sparse(a.mul_basis(x, y)).is_empty());
                }
            }
        }
    }
}
