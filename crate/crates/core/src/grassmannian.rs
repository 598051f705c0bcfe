//! Euler characteristics of quiver Grassmannians, by counting successor-closed
//! subsets of string bases and by point counting over prime fields.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};
use crate::quiver::Quiver;
use crate::rep::{check, Representation};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Tuples allowed for the point-count cross-check done by [`Method::Auto`].
const AUTO_CROSSCHECK_BUDGET: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "bwd")]
    Backward,
}

/// A walk in the quiver starting at `base`; letters are arrow ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringDatum {
    pub base: usize,
    pub walk: Vec<(String, Direction)>,
}

impl StringDatum {
    pub fn trivial(base: usize) -> Self {
        StringDatum { base, walk: Vec::new() }
    }

    pub fn new(base: usize, walk: &[(&str, Direction)]) -> Self {
        StringDatum { base, walk: walk.iter().map(|(a, d)| (a.to_string(), *d)).collect() }
    }

    /// Vertices z_0, ..., z_m visited by the walk.
    pub fn vertices(&self, q: &Quiver) -> Result<Vec<usize>> {
        if self.base >= q.n() {
            return Err(Error::InvalidWalk(format!("base vertex {} out of range", self.base + 1)));
        }
        let mut out = vec![self.base];
        let mut prev: Option<(usize, Direction)> = None;
        for (id, dir) in &self.walk {
            let a = q.arrow_index(id).map_err(|_| Error::InvalidWalk(format!("unknown arrow `{id}`")))?;
            let arrow = q.arrow(a);
            let v = *out.last().expect("nonempty");
            let next = match dir {
                Direction::Forward if arrow.source == v => arrow.target,
                Direction::Backward if arrow.target == v => arrow.source,
                _ => return Err(Error::InvalidWalk(format!("letter `{id}` does not start at vertex {}", v + 1))),
            };
            if prev == Some((a, opposite(*dir))) {
                return Err(Error::InvalidWalk(format!("walk backtracks along `{id}`")));
            }
            prev = Some((a, *dir));
            out.push(next);
        }
        Ok(out)
    }

    /// Edges of the coefficient quiver: (from node, to node) where an arrow maps one basis vector to another.
    fn successor_edges(&self, q: &Quiver) -> Result<Vec<(usize, usize)>> {
        self.vertices(q)?;
        Ok(self
            .walk
            .iter()
            .enumerate()
            .map(|(k, (_, dir))| match dir {
                Direction::Forward => (k, k + 1),
                Direction::Backward => (k + 1, k),
            })
            .collect())
    }
}

fn opposite(d: Direction) -> Direction {
    match d {
        Direction::Forward => Direction::Backward,
        Direction::Backward => Direction::Forward,
    }
}

/// String module of a walk, checked against the relations of `a`.
pub fn string_module(a: &TruncatedAlgebra, s: &StringDatum) -> Result<Representation> {
    let q = a.quiver();
    let verts = s.vertices(q)?;
    let mut dims = vec![0usize; q.n()];
    let mut local = Vec::with_capacity(verts.len());
    for &v in &verts {
        local.push(dims[v]);
        dims[v] += 1;
    }
    let mut maps: Vec<Matrix> = q.arrows().iter().map(|x| Matrix::zeros(dims[x.target], dims[x.source])).collect();
    for (k, (id, dir)) in s.walk.iter().enumerate() {
        let x = q.arrow_index(id)?;
        let (from, to) = match dir {
            Direction::Forward => (k, k + 1),
            Direction::Backward => (k + 1, k),
        };
        let entry = &mut maps[x][(local[to], local[from])];
        if !entry.is_zero() {
            return Err(Error::InvalidWalk(format!("arrow `{id}` used twice on one basis vector")));
        }
        *entry = Rational::one();
    }
    let m = Representation::new(q, dims, maps)?;
    check(a, &m).map_err(|e| Error::InvalidWalk(format!("string module fails its check: {e}")))?;
    Ok(m.with_strings(vec![s.clone()]))
}

pub type ChiTable = BTreeMap<Vec<usize>, BigInt>;

/// Successor-closed subsets of a single string, tallied by dimension vector.
pub fn string_chi_table(q: &Quiver, s: &StringDatum) -> Result<ChiTable> {
    let verts = s.vertices(q)?;
    let nodes = verts.len();
    if nodes > 26 {
        return Err(Error::TooLarge { needed: format!("2^{nodes}"), budget: 1 << 26 });
    }
    let mut succ = vec![0u32; nodes];
    for (from, to) in s.successor_edges(q)? {
        succ[from] |= 1 << to;
    }
    let mut table = ChiTable::new();
    for mask in 0u32..(1u32 << nodes) {
        let closed = (0..nodes).all(|k| mask & (1 << k) == 0 || succ[k] & !mask == 0);
        if closed {
            let mut e = vec![0usize; q.n()];
            for (k, &v) in verts.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    e[v] += 1;
                }
            }
            *table.entry(e).or_insert_with(BigInt::zero) += 1;
        }
    }
    Ok(table)
}

/// χ(Gr_e(M ⊕ N)) = Σ_{e'+e''=e} χ(Gr_{e'}(M)) χ(Gr_{e''}(N)).
pub fn convolve(x: &ChiTable, y: &ChiTable) -> ChiTable {
    let mut out = ChiTable::new();
    for (e1, c1) in x {
        for (e2, c2) in y {
            let e: Vec<usize> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Table for a direct sum of strings; the empty sum is the zero module.
pub fn strings_chi_table(q: &Quiver, strings: &[StringDatum]) -> Result<ChiTable> {
    let mut acc = ChiTable::new();
    acc.insert(vec![0; q.n()], BigInt::one());
    for s in strings {
        acc = convolve(&acc, &string_chi_table(q, s)?);
    }
    Ok(acc)
}

/// Dimension vector of the direct sum of the given strings.
pub fn certificate_dims(q: &Quiver, strings: &[StringDatum]) -> Result<Vec<usize>> {
    let mut dims = vec![0; q.n()];
    for s in strings {
        for v in s.vertices(q)? {
            dims[v] += 1;
        }
    }
    Ok(dims)
}

/// Number of successor-closed subsets with dimension vector `e`.
pub fn coordinate_chi(q: &Quiver, s: &StringDatum, e: &[usize]) -> Result<BigInt> {
    Ok(string_chi_table(q, s)?.get(e).cloned().unwrap_or_default())
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn reduce_mod(x: &Rational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64().expect("residue fits");
    if den == 0 {
        return Err(Error::FieldClash(p));
    }
    let num = x.numer().mod_floor(&pb).to_u64().expect("residue fits");
    Ok(num * mod_pow(den, p - 2, p) % p)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Gaussian binomial coefficient, saturating.
fn gaussian_binomial(d: usize, e: usize, p: u64) -> u128 {
    if e > d {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..e {
        let a = p.saturating_pow((d - k) as u32).saturating_sub(1);
        let b = p.saturating_pow((k + 1) as u32).saturating_sub(1);
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX || den == u128::MAX {
            return u128::MAX;
        }
        let g = num.gcd(&den);
        num /= g;
        den /= g;
    }
    num / den
}

/// Number of subspace tuples enumerated by point counting over F_p.
pub fn enumeration_size(dims: &[usize], e: &[usize], p: u64) -> u128 {
    dims.iter().zip(e).fold(1u128, |acc, (&d, &k)| acc.saturating_mul(gaussian_binomial(d, k, p)))
}

#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn contains(&self, w: &mut [u64], p: u64) -> bool {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = w[c];
            if f != 0 {
                for (x, r) in w.iter_mut().zip(row) {
                    *x = (*x + (p - f) * r) % p;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

/// All e-dimensional subspaces of F_p^d in reduced row echelon form.
fn subspaces(d: usize, e: usize, p: u64) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(e);
    pivot_sets(d, e, 0, &mut pivots, &mut |piv: &[usize]| {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(r, &c)| ((c + 1)..d).filter(|j| !piv.contains(j)).map(move |j| (r, j)))
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut rows = vec![vec![0u64; d]; e];
            for (r, &c) in piv.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, j), &v) in free.iter().zip(&digits) {
                rows[r][j] = v;
            }
            out.push(Subspace { rows, pivots: piv.to_vec() });
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return;
                }
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    });
    out
}

fn pivot_sets(d: usize, e: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == e {
        f(cur);
        return;
    }
    for c in from..d {
        if d - c < e - cur.len() {
            break;
        }
        cur.push(c);
        pivot_sets(d, e, c + 1, cur, f);
        cur.pop();
    }
}

/// Number of e-dimensional subrepresentations of M over F_p.
pub fn count_points(q: &Quiver, m: &Representation, e: &[usize], p: u64, budget: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::UnsupportedField(p));
    }
    let dims = m.dims();
    if e.len() != dims.len() || e.iter().zip(dims).any(|(a, b)| a > b) {
        return Err(Error::DimensionMismatch(format!("e = {e:?} does not fit below {dims:?}")));
    }
    let size = enumeration_size(dims, e, p);
    if size > budget as u128 {
        return Err(Error::TooLarge { needed: size.to_string(), budget });
    }
    let maps: Vec<Vec<Vec<u64>>> = m
        .maps()
        .iter()
        .map(|x| {
            (0..x.rows())
                .map(|i| (0..x.cols()).map(|j| reduce_mod(&x[(i, j)], p)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let spaces: Vec<Vec<Subspace>> = (0..q.n()).map(|i| subspaces(dims[i], e[i], p)).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(q.n());
    Ok(count_rec(q, &maps, &spaces, &mut chosen, p))
}

fn count_rec(q: &Quiver, maps: &[Vec<Vec<u64>>], spaces: &[Vec<Subspace>], chosen: &mut Vec<usize>, p: u64) -> u64 {
    let v = chosen.len();
    if v == spaces.len() {
        return 1;
    }
    let mut total = 0;
    for k in 0..spaces[v].len() {
        chosen.push(k);
        let ok = q.arrows().iter().enumerate().all(|(x, a)| {
            if a.source.max(a.target) != v {
                return true;
            }
            let (src, tgt) = (&spaces[a.source][chosen[a.source]], &spaces[a.target][chosen[a.target]]);
            src.rows.iter().all(|u| {
                let mut w: Vec<u64> =
                    maps[x].iter().map(|row| row.iter().zip(u).fold(0, |s, (m, y)| (s + m * y) % p)).collect();
                tgt.contains(&mut w, p)
            })
        });
        if ok {
            total += count_rec(q, maps, spaces, chosen, p);
        }
        chosen.pop();
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Auto,
    Coordinate,
    Pointcount,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "coordinate" => Ok(Method::Coordinate),
            "pointcount" => Ok(Method::Pointcount),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

fn denominators_divisible_by(m: &Representation, p: u64) -> bool {
    let pb = BigInt::from(p);
    m.maps().iter().any(|x| x.entries().iter().any(|r| (r.denom() % &pb).is_zero()))
}

/// χ(Gr_e(M)) by interpolating point counts over D + 1 primes, validated on one more.
pub fn pointcount_chi(q: &Quiver, m: &Representation, e: &[usize], budget: u64) -> Result<BigInt> {
    let degree: usize = m.dims().iter().zip(e).map(|(&d, &k)| k * d.saturating_sub(k)).sum();
    let mut primes = Vec::with_capacity(degree + 2);
    let mut p = 2u64;
    while primes.len() < degree + 2 {
        if is_prime(p) && !denominators_divisible_by(m, p) {
            primes.push(p);
        }
        p += 1;
    }
    let last = *primes.last().expect("at least two primes");
    let size = enumeration_size(m.dims(), e, last);
    if size > budget as u128 {
        return Err(Error::TooLarge { needed: size.to_string(), budget });
    }
    let counts: Vec<u64> =
        primes.par_iter().map(|&p| count_points(q, m, e, p, budget)).collect::<Result<Vec<_>>>()?;
    let xs: Vec<Rational> = primes.iter().map(|&p| Rational::from_integer(p.into())).collect();
    let ys: Vec<Rational> = counts.iter().map(|&c| Rational::from_integer(c.into())).collect();
    let (sample_x, check_x) = xs.split_at(degree + 1);
    let sample_y = &ys[..degree + 1];
    let predicted = lagrange(sample_x, sample_y, &check_x[0]);
    if predicted != ys[degree + 1] {
        return Err(Error::NonPolynomialCount(format!(
            "interpolant predicts {} points over F_{} but there are {}",
            predicted, primes[degree + 1], counts[degree + 1]
        )));
    }
    let at_one = lagrange(sample_x, sample_y, &Rational::one());
    if !at_one.is_integer() {
        return Err(Error::NonPolynomialCount(format!("value at q = 1 is {at_one}")));
    }
    Ok(at_one.to_integer())
}

fn lagrange(xs: &[Rational], ys: &[Rational], at: &Rational) -> Rational {
    let mut total = Rational::zero();
    for (j, (xj, yj)) in xs.iter().zip(ys).enumerate() {
        let mut term = yj.clone();
        for (k, xk) in xs.iter().enumerate() {
            if k != j {
                term = term * (at - xk) / (xj - xk);
            }
        }
        total += term;
    }
    total
}

/// χ(Gr_e(M)) for every e ≤ dim M, keyed by e; zero entries omitted.
pub fn chi_table(q: &Quiver, m: &Representation, method: Method, budget: u64) -> Result<ChiTable> {
    if let Some(strings) = m.strings() {
        if certificate_dims(q, strings)? != m.dims() {
            return Err(Error::InternalMismatch("string certificate does not match the dimension vector".into()));
        }
    }
    let from_strings = m.strings().map(|s| strings_chi_table(q, s)).transpose()?;
    let mut table = ChiTable::new();
    for e in sub_vectors(m.dims()) {
        let chi = match (method, &from_strings) {
            (Method::Coordinate, None) => return Err(Error::NoCertificate),
            (Method::Coordinate, Some(t)) => t.get(&e).cloned().unwrap_or_default(),
            (Method::Pointcount, _) | (Method::Auto, None) => pointcount_chi(q, m, &e, budget)?,
            (Method::Auto, Some(t)) => {
                let coord = t.get(&e).cloned().unwrap_or_default();
                match pointcount_chi(q, m, &e, budget.min(AUTO_CROSSCHECK_BUDGET)) {
                    Ok(pc) if pc != coord => {
                        return Err(Error::InternalMismatch(format!(
                            "coordinate count {coord} but point count {pc} for e = {e:?}"
                        )))
                    }
                    Ok(_) | Err(Error::TooLarge { .. }) | Err(Error::FieldClash(_)) => coord,
                    Err(other) => return Err(other),
                }
            }
        };
        if !chi.is_zero() {
            table.insert(e, chi);
        }
    }
    Ok(table)
}

/// χ(Gr_e(M)) for a single e.
pub fn euler_char(a: &TruncatedAlgebra, m: &Representation, e: &[usize], method: Method, budget: u64) -> Result<BigInt> {
    let q = a.quiver();
    if e.len() != m.dims().len() || e.iter().zip(m.dims()).any(|(x, d)| x > d) {
        return Err(Error::DimensionMismatch(format!("e = {e:?} does not fit below {:?}", m.dims())));
    }
    let coordinate = || -> Result<BigInt> {
        let strings = m.strings().ok_or(Error::NoCertificate)?;
        Ok(strings_chi_table(q, strings)?.get(e).cloned().unwrap_or_default())
    };
    match method {
        Method::Coordinate => coordinate(),
        Method::Pointcount => pointcount_chi(q, m, e, budget),
        Method::Auto => {
            if m.strings().is_none() {
                return pointcount_chi(q, m, e, budget);
            }
            let coord = coordinate()?;
            match pointcount_chi(q, m, e, budget) {
                Ok(pc) if pc != coord => Err(Error::InternalMismatch(format!(
                    "coordinate count {coord} but point count {pc} for e = {e:?}"
                ))),
                Ok(_) | Err(Error::TooLarge { .. }) => Ok(coord),
                Err(other) => Err(other),
            }
        }
    }
}

/// All e with 0 ≤ e ≤ d componentwise, in lexicographic order.
pub fn sub_vectors(d: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(d.len())];
    for &x in d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=x).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BasicAlgebra, RelationSet};
    use crate::linalg::rat;
    use crate::quiver::PathCombination;
    use Direction::*;

    fn loop_example() -> TruncatedAlgebra {
        let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        let cc = PathCombination::single(q.path(&["c", "c"]).unwrap());
        BasicAlgebra::new(q, RelationSet::new(vec![cc]).unwrap()).truncate(4).unwrap()
    }

    #[test]
    fn string_modules() {
        let a = loop_example();
        let q = a.quiver();
        let m = string_module(&a, &StringDatum::new(2, &[("c", Forward)])).unwrap();
        assert_eq!(m.dims(), &[0, 0, 2]);
        let u = string_module(&a, &StringDatum::new(0, &[("a", Forward), ("b", Forward)])).unwrap();
        assert_eq!(u.dims(), &[1, 1, 1]);
        assert_eq!(string_module(&a, &StringDatum::trivial(1)).unwrap(), Representation::simple(q, 1));
        let bad = StringDatum::new(2, &[("c", Forward), ("c", Forward)]);
        assert!(matches!(string_module(&a, &bad), Err(Error::InvalidWalk(_))));
        let back = StringDatum::new(0, &[("a", Forward), ("a", Backward)]);
        assert!(matches!(string_module(&a, &back), Err(Error::InvalidWalk(_))));
    }

    #[test]
    fn coordinate_counts() {
        let a = loop_example();
        let q = a.quiver();
        let s = StringDatum::new(2, &[("c", Forward)]);
        assert_eq!(coordinate_chi(q, &s, &[0, 0, 0]).unwrap(), BigInt::one());
        assert_eq!(coordinate_chi(q, &s, &[0, 0, 1]).unwrap(), BigInt::one());
        assert_eq!(coordinate_chi(q, &s, &[0, 0, 2]).unwrap(), BigInt::one());
    }

    #[test]
    fn point_counts() {
        let q = Quiver::new(1, vec![]).unwrap();
        let m = Representation::new(&q, vec![2], vec![]).unwrap();
        for p in [2, 3, 5, 7] {
            assert_eq!(count_points(&q, &m, &[1], p, DEFAULT_BUDGET).unwrap(), p + 1);
        }
        let k = Quiver::from_triples(2, &[("a", 1, 2), ("b", 1, 2)]).unwrap();
        let m = Representation::new(&k, vec![1, 1], vec![Matrix::from_i64(1, 1, &[1]), Matrix::from_i64(1, 1, &[0])])
            .unwrap();
        for p in [2, 3, 5] {
            assert_eq!(count_points(&k, &m, &[1, 0], p, DEFAULT_BUDGET).unwrap(), 0);
        }
        let a = loop_example();
        let m33 = string_module(&a, &StringDatum::new(2, &[("c", Forward)])).unwrap();
        assert_eq!(count_points(a.quiver(), &m33, &[0, 0, 1], 2, DEFAULT_BUDGET).unwrap(), 1);
        assert!(matches!(count_points(&q, &Representation::new(&q, vec![2], vec![]).unwrap(), &[1], 4, 10), Err(Error::UnsupportedField(4))));
    }

    #[test]
    fn generic_kronecker_chi() {
        let k = Quiver::from_triples(2, &[("a", 1, 2), ("b", 1, 2)]).unwrap();
        let m = Representation::new(&k, vec![1, 1], vec![Matrix::from_i64(1, 1, &[1]), Matrix::from_i64(1, 1, &[2])])
            .unwrap();
        assert_eq!(pointcount_chi(&k, &m, &[0, 1], DEFAULT_BUDGET).unwrap(), BigInt::one());
        assert_eq!(pointcount_chi(&k, &m, &[1, 0], DEFAULT_BUDGET).unwrap(), BigInt::zero());
    }

    #[test]
    fn field_clash() {
        let q = Quiver::from_triples(2, &[("a", 1, 2)]).unwrap();
        let half = Matrix::from_rows(1, 1, vec![vec![rat(1) / rat(2)]]);
        let m = Representation::new(&q, vec![1, 1], vec![half]).unwrap();
        assert_eq!(count_points(&q, &m, &[1, 1], 2, 100), Err(Error::FieldClash(2)));
        // interpolation skips the prime 2
        assert_eq!(pointcount_chi(&q, &m, &[0, 1], 100).unwrap(), BigInt::one());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(subspaces(4, 2, 2).len(), 35);
    }
}
