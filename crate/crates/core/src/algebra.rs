//! Truncated path algebras Λ_p = kQ / (I + m^p) with explicit normal forms.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};
use crate::quiver::{Path, PathCombination, Potential, Quiver};
use crate::rep::Representation;

/// Admissible relations: every path has length at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RelationSet {
    generators: Vec<PathCombination>,
}

impl RelationSet {
    pub fn new(generators: Vec<PathCombination>) -> Result<Self> {
        for g in &generators {
            if let Some(l) = g.min_len() {
                if l < 2 {
                    return Err(Error::NonAdmissible(format!("relation term of length {l}")));
                }
            }
        }
        Ok(RelationSet { generators: generators.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn generators(&self) -> &[PathCombination] {
        &self.generators
    }

    fn reversed(&self) -> RelationSet {
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let terms = g.terms().iter().map(|(c, p)| (c.clone(), p.reversed())).collect();
                PathCombination::new(terms).expect("reversal keeps terms parallel")
            })
            .collect();
        RelationSet { generators }
    }
}

/// A quiver with admissible relations, standing for the completed algebra Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicAlgebra {
    pub quiver: Quiver,
    pub relations: RelationSet,
}

impl BasicAlgebra {
    pub fn new(quiver: Quiver, relations: RelationSet) -> Self {
        BasicAlgebra { quiver, relations }
    }

    pub fn path_algebra(quiver: Quiver) -> Self {
        BasicAlgebra { quiver, relations: RelationSet::default() }
    }

    /// Jacobian algebra of a finite potential.
    pub fn jacobian(quiver: Quiver, w: &Potential) -> Result<Self> {
        let rels = crate::quiver::jacobian_relations(&quiver, w)?;
        Ok(BasicAlgebra { quiver, relations: RelationSet::new(rels)? })
    }

    pub fn truncate(&self, p: usize) -> Result<TruncatedAlgebra> {
        TruncatedAlgebra::new(self.quiver.clone(), self.relations.clone(), p)
    }

    /// Truncation at the stable level for modules of the given total dimensions.
    pub fn truncate_for(&self, dims: &[usize]) -> Result<TruncatedAlgebra> {
        self.truncate(stable_truncation_level(dims))
    }
}

/// 1 + Σ dims, clamped to at least 2.
pub fn stable_truncation_level(dims: &[usize]) -> usize {
    (1 + dims.iter().sum::<usize>()).max(2)
}

type Sparse = BTreeMap<usize, Rational>;

/// Λ_p with a basis of normal-form paths.
#[derive(Debug)]
pub struct TruncatedAlgebra {
    quiver: Quiver,
    relations: RelationSet,
    p: usize,
    finite: bool,
    paths: Vec<Path>,
    path_index: HashMap<Path, usize>,
    basis: Vec<usize>,
    normal: Vec<Vec<(usize, Rational)>>,
    // basis indices of paths from i to j
    between: Vec<Vec<Vec<usize>>>,
    opposite: OnceLock<Box<TruncatedAlgebra>>,
    saturated: OnceLock<bool>,
}

impl TruncatedAlgebra {
    pub fn new(quiver: Quiver, relations: RelationSet, p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidLevel(p));
        }
        let relations = RelationSet::new(relations.generators)?;
        let paths = quiver.enumerate_paths(p - 1);
        let path_index: HashMap<Path, usize> =
            paths.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();

        let mut ideal = Echelon::default();
        let mut queue: VecDeque<Sparse> = VecDeque::new();
        let to_sparse = |c: &PathCombination| -> Sparse {
            c.terms()
                .iter()
                .filter_map(|(x, path)| path_index.get(path).map(|&k| (k, x.clone())))
                .collect()
        };
        for r in relations.generators() {
            let v = to_sparse(r);
            if ideal.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            let (start, end) = {
                let k = *v.keys().next().expect("queued vectors are nonzero");
                (paths[k].start(), paths[k].end())
            };
            for (a, arrow) in quiver.arrows().iter().enumerate() {
                let single = quiver.path_from_indices(vec![a]).expect("single arrow");
                let mut sides = Vec::new();
                if arrow.source == end {
                    sides.push(true);
                }
                if arrow.target == start {
                    sides.push(false);
                }
                for left in sides {
                    let mut w = Sparse::new();
                    for (&k, c) in &v {
                        let prod = if left {
                            quiver.compose(&single, &paths[k])
                        } else {
                            quiver.compose(&paths[k], &single)
                        }
                        .expect("endpoints checked");
                        if let Some(&idx) = path_index.get(&prod) {
                            w.insert(idx, c.clone());
                        }
                    }
                    if !w.is_empty() && ideal.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }

        let basis: Vec<usize> = (0..paths.len()).filter(|k| !ideal.rows.contains_key(k)).collect();
        let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(b, &k)| (k, b)).collect();
        let normal = (0..paths.len())
            .map(|k| match ideal.rows.get(&k) {
                Some(row) => row
                    .iter()
                    .filter(|(&c, _)| c != k)
                    .map(|(c, x)| (pos[c], -x.clone()))
                    .collect(),
                None => vec![(pos[&k], Rational::one())],
            })
            .collect();
        let n = quiver.n();
        let mut between = vec![vec![Vec::new(); n]; n];
        for (b, &k) in basis.iter().enumerate() {
            between[paths[k].start()][paths[k].end()].push(b);
        }
        Ok(TruncatedAlgebra {
            quiver,
            relations,
            p,
            finite: false,
            paths,
            path_index,
            basis,
            normal,
            between,
            opposite: OnceLock::new(),
            saturated: OnceLock::new(),
        })
    }

    /// Treat Λ_p as an algebra in its own right rather than as an
    /// approximation of Λ; level requirements are then not enforced.
    pub fn into_finite(mut self) -> Self {
        self.finite = true;
        self.opposite = OnceLock::new();
        self
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    pub fn level(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<&Path> {
        self.basis.iter().map(|&k| &self.paths[k]).collect()
    }

    pub fn basis_path(&self, b: usize) -> &Path {
        &self.paths[self.basis[b]]
    }

    pub fn basis_names(&self) -> Vec<String> {
        self.basis().into_iter().map(|p| self.quiver.path_name(p)).collect()
    }

    /// Basis indices of the paths from `i` to `j`.
    pub fn paths_between(&self, i: usize, j: usize) -> &[usize] {
        &self.between[i][j]
    }

    /// True when m^p ⊆ I + m^{p+1}, so that Λ_q = Λ_p for all q ≥ p.
    pub fn is_saturated(&self) -> bool {
        *self.saturated.get_or_init(|| {
            if self.top_layer_vanishes() {
                return true;
            }
            let next = TruncatedAlgebra::new(self.quiver.clone(), self.relations.clone(), self.p + 1)
                .expect("higher level of a valid algebra");
            next.top_layer_vanishes()
        })
    }

    fn top_layer_vanishes(&self) -> bool {
        self.paths.iter().enumerate().all(|(k, p)| p.len() + 1 < self.p || self.normal[k].is_empty())
    }

    /// Succeeds when results at this level agree with those over Λ for
    /// invariants needing level `need`.
    pub fn require_level(&self, need: usize) -> Result<()> {
        if self.finite || self.p >= need || self.is_saturated() {
            Ok(())
        } else {
            Err(Error::LevelTooLow { have: self.p, need })
        }
    }

    /// Normal form of an arbitrary path as (basis index, coefficient) pairs.
    pub fn reduce_path(&self, p: &Path) -> Vec<(usize, Rational)> {
        match self.path_index.get(p) {
            Some(&k) => self.normal[k].clone(),
            None => {
                debug_assert!(p.len() >= self.p, "unknown path of short length");
                Vec::new()
            }
        }
    }

    /// Normal form of a combination, as a sparse vector over the basis.
    pub fn reduce(&self, c: &PathCombination) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for (x, p) in c.terms() {
            for (b, y) in self.reduce_path(p) {
                *out.entry(b).or_insert_with(Rational::zero) += x * &y;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Product `x · y` of basis elements (run `y` first).
    pub fn mul_basis(&self, x: usize, y: usize) -> Vec<(usize, Rational)> {
        match self.quiver.compose(self.basis_path(x), self.basis_path(y)) {
            Some(p) => self.reduce_path(&p),
            None => Vec::new(),
        }
    }

    /// The indecomposable projective P_i = Λ_p e_i.
    pub fn projective(&self, i: usize) -> Representation {
        let n = self.n();
        let dims: Vec<usize> = (0..n).map(|j| self.between[i][j].len()).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let (j, k) = (arrow.source, arrow.target);
                let single = self.quiver.path_from_indices(vec![a]).expect("arrow");
                let target_pos = positions(&self.between[i][k]);
                let mut m = Matrix::zeros(dims[k], dims[j]);
                for (col, &b) in self.between[i][j].iter().enumerate() {
                    let prod = self.quiver.compose(&single, self.basis_path(b)).expect("composable");
                    for (bb, c) in self.reduce_path(&prod) {
                        m[(target_pos[&bb], col)] = c;
                    }
                }
                m
            })
            .collect();
        Representation::new(&self.quiver, dims, maps).expect("projective has consistent shapes")
    }

    /// The indecomposable injective I_i = D(e_i Λ_p).
    pub fn injective(&self, i: usize) -> Representation {
        let n = self.n();
        let dims: Vec<usize> = (0..n).map(|j| self.between[j][i].len()).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let (j, k) = (arrow.source, arrow.target);
                let single = self.quiver.path_from_indices(vec![a]).expect("arrow");
                let source_pos = positions(&self.between[j][i]);
                let mut m = Matrix::zeros(dims[k], dims[j]);
                for (row, &b) in self.between[k][i].iter().enumerate() {
                    let prod = self.quiver.compose(self.basis_path(b), &single).expect("composable");
                    for (bb, c) in self.reduce_path(&prod) {
                        m[(row, source_pos[&bb])] = c;
                    }
                }
                m
            })
            .collect();
        Representation::new(&self.quiver, dims, maps).expect("injective has consistent shapes")
    }

    /// Λ_p for the opposite quiver with reversed relations.
    pub fn opposite(&self) -> &TruncatedAlgebra {
        self.opposite.get_or_init(|| {
            let op = TruncatedAlgebra::new(self.quiver.opposite(), self.relations.reversed(), self.p)
                .expect("opposite of a valid algebra");
            Box::new(TruncatedAlgebra { finite: self.finite, ..op })
        })
    }

    /// Same presentation at another level.
    pub fn at_level(&self, p: usize) -> Result<TruncatedAlgebra> {
        let t = TruncatedAlgebra::new(self.quiver.clone(), self.relations.clone(), p)?;
        Ok(if self.finite { t.into_finite() } else { t })
    }

    pub fn presentation(&self) -> BasicAlgebra {
        BasicAlgebra::new(self.quiver.clone(), self.relations.clone())
    }
}

fn positions(v: &[usize]) -> HashMap<usize, usize> {
    v.iter().enumerate().map(|(k, &b)| (b, k)).collect()
}

/// Reduced row echelon form of a sparse subspace; each row is keyed by its
/// pivot, which is the largest column it touches.
#[derive(Default, Debug)]
struct Echelon {
    rows: BTreeMap<usize, Sparse>,
}

impl Echelon {
    /// Adds `v` to the span; returns whether the span grew.
    fn insert(&mut self, mut v: Sparse) -> bool {
        // rows only touch columns up to their pivot, so sweep downwards
        let mut cursor = v.keys().next_back().copied();
        while let Some(k) = cursor {
            if let (Some(row), Some(f)) = (self.rows.get(&k), v.get(&k).cloned()) {
                for (c, x) in row {
                    let e = v.entry(*c).or_insert_with(Rational::zero);
                    *e -= &f * x;
                }
                v.retain(|_, x| !x.is_zero());
            }
            cursor = v.range(..k).next_back().map(|(&c, _)| c);
        }
        let Some((&pivot, lead)) = v.iter().next_back() else {
            return false;
        };
        let inv = lead.recip();
        for x in v.values_mut() {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(f) = row.get(&pivot).cloned() {
                for (c, x) in &v {
                    let e = row.entry(*c).or_insert_with(Rational::zero);
                    *e -= &f * x;
                }
                row.retain(|_, x| !x.is_zero());
            }
        }
        self.rows.insert(pivot, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    pub(crate) fn loop_example() -> BasicAlgebra {
        let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        let cc = PathCombination::single(q.path(&["c", "c"]).unwrap());
        BasicAlgebra::new(q, RelationSet::new(vec![cc]).unwrap())
    }

    #[test]
    fn loop_quiver_basis() {
        let q = Quiver::from_triples(1, &[("c", 1, 1)]).unwrap();
        let a = BasicAlgebra::path_algebra(q).truncate(3).unwrap();
        assert_eq!(a.basis_names(), ["e1", "c", "cc"]);
        assert!(!a.is_saturated());
    }

    #[test]
    fn c_squared_basis() {
        let a = loop_example().truncate(4).unwrap();
        assert_eq!(a.basis_names(), ["e1", "e2", "e3", "a", "b", "c", "ba", "cb", "cba"]);
        assert!(a.is_saturated());
        assert_eq!(a.projective(2).dims(), &[0, 0, 2]);
        assert_eq!(a.projective(0).dims(), &[1, 1, 2]);
        assert_eq!(a.injective(0).dims(), &[1, 0, 0]);
        assert_eq!(a.injective(2).dims(), &[2, 2, 2]);
        let total: usize = (0..3).map(|i| a.injective(i).total_dim()).sum();
        assert_eq!(total, a.dim());
        let total: usize = (0..3).map(|i| a.projective(i).total_dim()).sum();
        assert_eq!(total, a.dim());
    }

    #[test]
    fn a2_dimension() {
        let q = Quiver::from_triples(2, &[("a", 1, 2)]).unwrap();
        assert_eq!(BasicAlgebra::path_algebra(q).truncate(2).unwrap().dim(), 3);
    }

    #[test]
    fn stable_levels() {
        assert_eq!(stable_truncation_level(&[2]), 3);
        assert_eq!(stable_truncation_level(&[3, 3]), 7);
        assert_eq!(stable_truncation_level(&[]), 2);
    }

    #[test]
    fn nonhomogeneous_relation_collapses() {
        // c^2 = c^3 forces c^2 into every power of the radical
        let q = Quiver::from_triples(1, &[("c", 1, 1)]).unwrap();
        let r = PathCombination::new(vec![
            (rat(1), q.path(&["c", "c"]).unwrap()),
            (rat(-1), q.path(&["c", "c", "c"]).unwrap()),
        ])
        .unwrap();
        let a = BasicAlgebra::new(q, RelationSet::new(vec![r]).unwrap()).truncate(4).unwrap();
        assert_eq!(a.basis_names(), ["e1", "c"]);
        assert!(a.is_saturated());
    }

    #[test]
    fn saturation_needs_next_level() {
        let a = loop_example().truncate(3).unwrap();
        assert!(!a.is_saturated());
        assert!(a.require_level(5).is_err());
        assert!(loop_example().truncate(4).unwrap().is_saturated());
    }

    #[test]
    fn associativity_and_truncation() {
        let a = loop_example().truncate(4).unwrap();
        let d = a.dim();
        let mul = |x: &[(usize, Rational)], y: &[(usize, Rational)]| {
            let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
            for (i, s) in x {
                for (j, t) in y {
                    for (k, u) in a.mul_basis(*i, *j) {
                        *out.entry(k).or_insert_with(Rational::zero) += s * t * u;
                    }
                }
            }
            out.retain(|_, v| !v.is_zero());
            out.into_iter().collect::<Vec<_>>()
        };
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let one = |b| vec![(b, rat(1))];
                    assert_eq!(mul(&mul(&one(x), &one(y)), &one(z)), mul(&one(x), &mul(&one(y), &one(z))));
                }
            }
        }
    }

    #[test]
    fn jacobian_truncation_dimension() {
        let q = Quiver::from_triples(
            3,
            &[("a1", 1, 2), ("a2", 1, 2), ("b1", 2, 3), ("b2", 2, 3), ("c1", 3, 1), ("c2", 3, 1)],
        )
        .unwrap();
        let w = Potential::new(vec![
            (rat(1), q.path(&["c1", "b1", "a1"]).unwrap()),
            (rat(1), q.path(&["c2", "b2", "a2"]).unwrap()),
        ])
        .unwrap();
        let a = BasicAlgebra::jacobian(q, &w).unwrap().truncate(3).unwrap();
        // 3 idempotents, 6 arrows, 12 paths of length two minus 6 relations
        assert_eq!(a.dim(), 15);
    }
}
