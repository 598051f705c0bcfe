#![allow(dead_code)]

use ccalg::algebra::TruncatedAlgebra;
use ccalg::catalog::{self, Example};
use ccalg::linalg::Matrix;
use ccalg::quiver::Quiver;
use ccalg::rep::{DecoratedRepresentation, Representation};
use proptest::prelude::*;

pub const BUDGET: u64 = 5_000_000;

/// The three worked examples with a level that is stable for pairs from their corpora.
pub fn corpora() -> Vec<(Example, TruncatedAlgebra)> {
    [catalog::tail_with_loop(), catalog::looped_source(), catalog::linear_a3_zero_relation()]
        .into_iter()
        .map(|ex| {
            let ex = ex.unwrap();
            let a = ex.truncation().unwrap();
            (ex, a)
        })
        .collect()
}

pub fn decorated(ex: &Example, a: &TruncatedAlgebra, label: &str) -> DecoratedRepresentation {
    ex.entry(label).unwrap_or_else(|| panic!("no corpus entry {label}")).decorated(a).unwrap()
}

/// Arbitrary quiver with up to `max_n` vertices and `max_arrows` arrows, loops allowed.
pub fn quiver(max_n: usize, max_arrows: usize) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_arrows).prop_map(move |ends| {
            let ids: Vec<String> = (0..ends.len()).map(|k| format!("x{k}")).collect();
            let triples: Vec<(&str, usize, usize)> =
                ends.iter().zip(&ids).map(|(&(s, t), id)| (id.as_str(), s + 1, t + 1)).collect();
            Quiver::from_triples(n, &triples).unwrap()
        })
    })
}

/// Random integer representation with the given dimension vector.
pub fn integer_rep(q: &Quiver, dims: &[usize], entries: &[i64]) -> Representation {
    let mut it = entries.iter().copied().cycle();
    let maps = q
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (dims[a.target], dims[a.source]);
            let e: Vec<i64> = (0..r * c).map(|_| it.next().unwrap_or(0)).collect();
            Matrix::from_i64(r, c, &e)
        })
        .collect();
    Representation::new(q, dims.to_vec(), maps).unwrap()
}

/// Dimension vectors with entries at most `max` and total at most `total`.
pub fn dims(n: usize, max: usize, total: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..=max, n).prop_filter("total dimension", move |d| d.iter().sum::<usize>() <= total)
}

pub fn entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 1..24)
}
