mod common;

use ccalg::catalog;
use ccalg::linalg::rat;
use ccalg::quiver::{cyclic_derivative, jacobian_relations, Path, PathCombination, Potential, Quiver};
use proptest::prelude::*;

fn cycles(q: &Quiver, max_len: usize) -> Vec<Path> {
    q.enumerate_paths(max_len).into_iter().filter(|p| !p.is_trivial() && p.is_cycle()).collect()
}

#[test]
fn b_matrix_examples() {
    assert_eq!(catalog::kronecker(2).unwrap().b_matrix(), vec![vec![0, -2], vec![2, 0]]);
    let tail = catalog::tail_with_loop().unwrap();
    assert_eq!(tail.quiver().b_matrix(), vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]]);
    assert_eq!(Quiver::from_triples(3, &[]).unwrap().b_matrix(), vec![vec![0; 3]; 3]);
}

#[test]
fn a2_paths_do_not_compose() {
    let q = catalog::a2().unwrap();
    assert_eq!(q.enumerate_paths(3).len(), 3);
}

#[test]
fn jacobian_relations_of_the_doubled_triangle() {
    let q = catalog::doubled_triangle().unwrap();
    let cubic = jacobian_relations(&q, &catalog::doubled_triangle_potential(&q, false).unwrap()).unwrap();
    assert_eq!(cubic.len(), 6);
    assert!(cubic.iter().all(|r| r.terms().len() == 1 && r.terms()[0].1.len() == 2));
    let mixed = jacobian_relations(&q, &catalog::doubled_triangle_potential(&q, true).unwrap()).unwrap();
    assert_eq!(mixed.len(), 6);
    for r in &mixed {
        let lens: Vec<usize> = r.terms().iter().map(|(_, p)| p.len()).collect();
        assert_eq!(lens, vec![2, 5]);
    }
    assert!(jacobian_relations(&q, &Potential::default()).unwrap().is_empty());
}

#[test]
fn malformed_quivers_are_rejected() {
    assert!(Quiver::from_triples(0, &[]).is_err());
    assert!(Quiver::from_triples(2, &[("a", 1, 3)]).is_err());
    assert!(Quiver::from_triples(2, &[("a", 1, 2), ("a", 2, 1)]).is_err());
    let q = catalog::a3().unwrap();
    assert!(q.path(&["a", "b"]).is_err());
    assert!(q.path(&["z"]).is_err());
}

/// Number of walks of length k, counted by powers of the adjacency matrix.
fn walks_by_length(q: &Quiver, max_len: usize) -> usize {
    let n = q.n();
    let mut adj = vec![vec![0usize; n]; n];
    for a in q.arrows() {
        adj[a.source][a.target] += 1;
    }
    let mut power: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| usize::from(i == j)).collect()).collect();
    let mut total = n;
    for _ in 0..max_len {
        power = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| power[i][k] * adj[k][j]).sum()).collect())
            .collect();
        total += power.iter().flatten().sum::<usize>();
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_matrix_is_skew_symmetric(q in common::quiver(5, 8)) {
        let b = q.b_matrix();
        for i in 0..q.n() {
            for j in 0..q.n() {
                prop_assert_eq!(b[i][j], -b[j][i]);
            }
        }
    }

    #[test]
    fn path_enumeration_counts_walks(q in common::quiver(4, 5), m in 0usize..4) {
        let paths = q.enumerate_paths(m);
        prop_assert_eq!(paths.len(), walks_by_length(&q, m));
        for p in paths.iter().filter(|p| !p.is_trivial()) {
            let ids = q.path_ids(p);
            let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            prop_assert_eq!(&q.path(&refs).unwrap(), p);
        }
        prop_assert!(paths.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn cyclic_derivative_is_linear(
        q in common::quiver(3, 5),
        c1 in prop::collection::vec(-3i64..=3, 6),
        c2 in prop::collection::vec(-3i64..=3, 6),
        lambda in -3i64..=3,
    ) {
        let cyc = cycles(&q, 3);
        prop_assume!(!cyc.is_empty());
        let pot = |c: &[i64]| Potential::new(cyc.iter().zip(c.iter().cycle()).map(|(p, &x)| (rat(x), p.clone())).collect()).unwrap();
        let (w1, w2) = (pot(&c1), pot(&c2));
        let mut sum_terms = w1.terms().to_vec();
        sum_terms.extend(w2.terms().iter().map(|(c, p)| (c * rat(lambda), p.clone())));
        let w = Potential::new(sum_terms).unwrap();
        for a in 0..q.arrows().len() {
            let lhs = cyclic_derivative(&q, &w, a);
            let rhs = cyclic_derivative(&q, &w1, a).add(&cyclic_derivative(&q, &w2, a).scale(&rat(lambda))).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_terms_of_a_cycle_count_its_arrows(q in common::quiver(3, 6)) {
        for cycle in cycles(&q, 4) {
            let distinct: std::collections::BTreeSet<usize> = cycle.arrows().iter().copied().collect();
            if distinct.len() != cycle.len() {
                continue;
            }
            let w = Potential::new(vec![(rat(1), cycle.clone())]).unwrap();
            let count: usize = (0..q.arrows().len()).map(|a| cyclic_derivative(&q, &w, a).terms().len()).sum();
            prop_assert_eq!(count, cycle.len());
        }
    }

    #[test]
    fn path_combinations_merge_duplicates(q in common::quiver(3, 4), k in 1usize..4) {
        if let Some(p) = q.enumerate_paths(2).into_iter().find(|p| !p.is_trivial()) {
            let c = PathCombination::new(vec![(rat(1), p.clone()); k]).unwrap();
            prop_assert_eq!(c.terms().len(), 1);
            prop_assert_eq!(&c.terms()[0].0, &rat(k as i64));
            let zero = c.add(&c.scale(&rat(-1))).unwrap();
            prop_assert!(zero.is_zero());
        }
    }
}
