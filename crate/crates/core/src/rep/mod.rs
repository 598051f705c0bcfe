//! Representations as tuples of exact rational matrices.

mod homology;

pub use homology::{
    ar_formula_sides, e_invariant, e_invariant_checked, ext1, g_vector, hom_space, injective_presentation, is_e_rigid,
    is_indecomposable, projective_cover, socle, tau_minus, GVector, HomSpace, InjectivePresentation,
    ProjectiveCover,
};

use crate::algebra::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::grassmannian::StringDatum;
use crate::linalg::{Matrix, Rational};
use crate::quiver::{Path, Quiver};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dims: Vec<usize>,
    maps: Vec<Matrix>,
    strings: Option<Vec<StringDatum>>,
}

impl Representation {
    /// Checks that every arrow matrix has shape d_t × d_s.
    pub fn new(q: &Quiver, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.len() != q.n() {
            return Err(Error::ShapeMismatch(format!("expected {} dimensions, got {}", q.n(), dims.len())));
        }
        if maps.len() != q.arrows().len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} arrow matrices, got {}",
                q.arrows().len(),
                maps.len()
            )));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            let want = (dims[a.target], dims[a.source]);
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "matrix of `{}` is {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Representation { dims, maps, strings: None })
    }

    pub fn zero(q: &Quiver) -> Self {
        let dims = vec![0; q.n()];
        let maps = q.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        Representation { dims, maps, strings: Some(Vec::new()) }
    }

    pub fn simple(q: &Quiver, i: usize) -> Self {
        let mut dims = vec![0; q.n()];
        dims[i] = 1;
        let maps = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        Representation { dims, maps, strings: Some(vec![StringDatum::trivial(i)]) }
    }

    /// Attaches a certificate that the module is this direct sum of strings.
    pub fn with_strings(mut self, strings: Vec<StringDatum>) -> Self {
        self.strings = Some(strings);
        self
    }

    pub fn without_strings(mut self) -> Self {
        self.strings = None;
        self
    }

    pub fn strings(&self) -> Option<&[StringDatum]> {
        self.strings.as_deref()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// The matrix by which a path acts.
    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let mut m = Matrix::identity(self.dims[p.start()]);
        for &a in p.arrows().iter().rev() {
            m = self.maps[a].mul(&m);
        }
        m
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| Matrix::block_diag(a, b)).collect();
        let strings = match (&self.strings, &other.strings) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        Representation { dims, maps, strings }
    }

    /// Linear dual, a representation of the opposite quiver.
    pub fn dual(&self) -> Representation {
        Representation { dims: self.dims.clone(), maps: self.maps.iter().map(Matrix::transpose).collect(), strings: None }
    }

    /// Whether all entries are integers (needed for point counting).
    pub fn is_integral(&self) -> bool {
        self.maps.iter().all(Matrix::is_integral)
    }
}

/// A representation together with decoration dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedRepresentation {
    pub module: Representation,
    pub decoration: Vec<usize>,
}

impl DecoratedRepresentation {
    pub fn new(module: Representation, decoration: Vec<usize>) -> Result<Self> {
        if decoration.len() != module.dims().len() {
            return Err(Error::ShapeMismatch("decoration length differs from vertex count".into()));
        }
        Ok(DecoratedRepresentation { module, decoration })
    }

    pub fn undecorated(module: Representation) -> Self {
        let decoration = vec![0; module.dims().len()];
        DecoratedRepresentation { module, decoration }
    }

    /// S_i^-: zero module with a one-dimensional decoration at `i`.
    pub fn negative_simple(q: &Quiver, i: usize) -> Self {
        let mut decoration = vec![0; q.n()];
        decoration[i] = 1;
        DecoratedRepresentation { module: Representation::zero(q), decoration }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        DecoratedRepresentation {
            module: self.module.direct_sum(&other.module),
            decoration: self.decoration.iter().zip(&other.decoration).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        self.module.dims()
    }
}

/// Validates shapes, relations and nilpotency.
pub fn check(a: &TruncatedAlgebra, m: &Representation) -> Result<()> {
    let q = a.quiver();
    Representation::new(q, m.dims.clone(), m.maps.clone())?;
    for r in a.relations().generators() {
        let Some((s, t)) = r.endpoints() else { continue };
        let mut acc = Matrix::zeros(m.dims[t], m.dims[s]);
        for (c, p) in r.terms() {
            acc = acc.add(&m.path_matrix(p).scale(c));
        }
        if !acc.is_zero() {
            return Err(Error::RelationViolated(r.display(q)));
        }
    }
    let layers = loewy_length(q, m).ok_or(Error::NotNilpotent)?;
    if a.is_finite() && layers > a.level() {
        return Err(Error::RelationViolated(format!("paths of length {} act nonzero", a.level())));
    }
    Ok(())
}

/// Number of radical layers, or None if the radical series stalls above zero.
pub fn loewy_length(q: &Quiver, m: &Representation) -> Option<usize> {
    let mut layer: Vec<Matrix> = m.dims.iter().map(|&d| Matrix::identity(d)).collect();
    let mut size: usize = m.total_dim();
    let mut count = 0;
    while size > 0 {
        let next: Vec<Matrix> = (0..q.n())
            .map(|t| {
                let images: Vec<Matrix> = q
                    .arrows()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.target == t)
                    .map(|(k, a)| m.maps[k].mul(&layer[a.source]))
                    .collect();
                let refs: Vec<&Matrix> = images.iter().collect();
                Matrix::hstack(m.dims[t], &refs).column_space()
            })
            .collect();
        let next_size: usize = next.iter().map(Matrix::cols).sum();
        if next_size == size {
            return None;
        }
        size = next_size;
        layer = next;
        count += 1;
    }
    Some(count)
}

/// Subrepresentation spanned at each vertex by the columns of `bases`.
pub(crate) fn subrepresentation(q: &Quiver, m: &Representation, bases: &[Matrix]) -> Representation {
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let image = m.maps[k].mul(&bases[a.source]);
            bases[a.target].solve(&image).expect("subspace is invariant")
        })
        .collect();
    Representation { dims, maps, strings: None }
}

/// Quotient by the invariant subspaces spanned by `bases`, with the
/// projection matrices.
pub(crate) fn quotient(q: &Quiver, m: &Representation, bases: &[Matrix]) -> (Representation, Vec<Matrix>) {
    let mut proj = Vec::with_capacity(q.n());
    let mut lifts = Vec::with_capacity(q.n());
    for (i, b) in bases.iter().enumerate() {
        let c = Matrix::complement(b);
        let full = Matrix::hstack(m.dims[i], &[b, &c]);
        let inv = full.inverse().expect("basis plus complement is invertible");
        let rows: Vec<usize> = (b.cols()..m.dims[i]).collect();
        proj.push(inv.select_rows(&rows));
        lifts.push(c);
    }
    let dims: Vec<usize> = proj.iter().map(Matrix::rows).collect();
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| proj[a.target].mul(&m.maps[k]).mul(&lifts[a.source]))
        .collect();
    (Representation { dims, maps, strings: None }, proj)
}

/// Jordan block with ones below the diagonal, size `d`.
pub fn nilpotent_jordan_block(d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Rational::from_integer(1.into());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BasicAlgebra, RelationSet};
    use crate::quiver::PathCombination;

    #[test]
    fn check_catches_violations() {
        let q = Quiver::from_triples(1, &[("c", 1, 1)]).unwrap();
        let a = BasicAlgebra::path_algebra(q.clone()).truncate(3).unwrap();
        let id = Representation::new(&q, vec![1], vec![Matrix::identity(1)]).unwrap();
        assert_eq!(check(&a, &id), Err(Error::NotNilpotent));
        assert!(check(&a, &Representation::simple(&q, 0)).is_ok());

        let q3 = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        let cc = PathCombination::single(q3.path(&["c", "c"]).unwrap());
        let alg = BasicAlgebra::new(q3.clone(), RelationSet::new(vec![cc]).unwrap()).truncate(4).unwrap();
        let m33 = Representation::new(
            &q3,
            vec![0, 0, 2],
            vec![Matrix::zeros(0, 0), Matrix::zeros(2, 0), nilpotent_jordan_block(2)],
        )
        .unwrap();
        assert!(check(&alg, &m33).is_ok());
        let m333 = Representation::new(
            &q3,
            vec![0, 0, 3],
            vec![Matrix::zeros(0, 0), Matrix::zeros(3, 0), nilpotent_jordan_block(3)],
        )
        .unwrap();
        assert!(matches!(check(&alg, &m333), Err(Error::RelationViolated(_))));
    }

    #[test]
    fn direct_sum_dims() {
        let q = Quiver::from_triples(2, &[("a", 1, 2)]).unwrap();
        let s = Representation::simple(&q, 0);
        assert_eq!(s.direct_sum(&s).dims(), &[2, 0]);
        assert_eq!(s.direct_sum(&Representation::zero(&q)), s);
    }
}
