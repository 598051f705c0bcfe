use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{stable_truncation_level, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{Coordinates, Matrix, Rational};
use crate::quiver::Quiver;

use super::{quotient, subrepresentation, DecoratedRepresentation, Representation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GVector(pub Vec<i64>);

impl GVector {
    pub fn add(&self, other: &GVector) -> GVector {
        GVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl std::fmt::Display for GVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Intertwiners M -> N, each given by one matrix per vertex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Vec<Matrix>>,
}

pub fn hom_space(q: &Quiver, m: &Representation, n: &Representation) -> HomSpace {
    let (dm, dn) = (m.dims(), n.dims());
    let mut offset = Vec::with_capacity(q.n());
    let mut vars = 0;
    for i in 0..q.n() {
        offset.push(vars);
        vars += dn[i] * dm[i];
    }
    let eqs: usize = q.arrows().iter().map(|a| dn[a.target] * dm[a.source]).sum();
    let mut sys = Matrix::zeros(eqs, vars);
    let mut row = 0;
    for (k, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (m.map(k), n.map(k));
        for r in 0..dn[t] {
            for c in 0..dm[s] {
                // (f_t M_a)[r,c] - (N_a f_s)[r,c]
                for x in 0..dm[t] {
                    let v = &ma[(x, c)];
                    if !v.is_zero() {
                        sys[(row, offset[t] + r * dm[t] + x)] += v;
                    }
                }
                for x in 0..dn[s] {
                    let v = &na[(r, x)];
                    if !v.is_zero() {
                        sys[(row, offset[s] + x * dm[s] + c)] -= v;
                    }
                }
                row += 1;
            }
        }
    }
    let kernel = sys.kernel();
    let basis = (0..kernel.cols())
        .map(|j| {
            (0..q.n())
                .map(|i| {
                    let mut f = Matrix::zeros(dn[i], dm[i]);
                    for r in 0..dn[i] {
                        for c in 0..dm[i] {
                            f[(r, c)] = kernel[(offset[i] + r * dm[i] + c, j)].clone();
                        }
                    }
                    f
                })
                .collect()
        })
        .collect();
    HomSpace { dim: kernel.cols(), basis }
}

/// Socle multiplicities: dimension of the joint kernel of outgoing arrows.
pub fn socle(q: &Quiver, m: &Representation) -> Vec<usize> {
    socle_bases(q, m).iter().map(Matrix::cols).collect()
}

fn socle_bases(q: &Quiver, m: &Representation) -> Vec<Matrix> {
    (0..q.n())
        .map(|i| {
            let outs: Vec<&Matrix> =
                q.arrows().iter().enumerate().filter(|(_, a)| a.source == i).map(|(k, _)| m.map(k)).collect();
            Matrix::vstack(m.dims()[i], &outs).kernel()
        })
        .collect()
}

/// Minimal projective cover P_0 -> M with its kernel.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    /// Generators: (vertex, element of M at that vertex).
    pub generators: Vec<(usize, Matrix)>,
    /// P_0 as a direct sum of indecomposable projectives, one per generator.
    pub module: Representation,
    /// Labels of the basis of P_0 at each vertex: (generator, algebra basis index).
    pub labels: Vec<Vec<(usize, usize)>>,
    /// The surjection, one matrix per vertex.
    pub map: Vec<Matrix>,
    /// Kernel bases, one matrix of columns per vertex.
    pub kernel: Vec<Matrix>,
}

impl ProjectiveCover {
    pub fn syzygy(&self, q: &Quiver) -> Representation {
        subrepresentation(q, &self.module, &self.kernel)
    }
}

pub fn projective_cover(a: &TruncatedAlgebra, m: &Representation) -> ProjectiveCover {
    let q = a.quiver();
    let n = q.n();
    let mut generators = Vec::new();
    for i in 0..n {
        let ins: Vec<&Matrix> =
            q.arrows().iter().enumerate().filter(|(_, x)| x.target == i).map(|(k, _)| m.map(k)).collect();
        let rad = Matrix::hstack(m.dims()[i], &ins).column_space();
        let top = Matrix::complement(&rad);
        for j in 0..top.cols() {
            generators.push((i, Matrix::column_vector(top.column(j))));
        }
    }
    let mut module = Representation::zero(q).without_strings();
    let mut labels = vec![Vec::new(); n];
    for (g, (v, _)) in generators.iter().enumerate() {
        module = module.direct_sum(&a.projective(*v));
        for (j, l) in labels.iter_mut().enumerate() {
            l.extend(a.paths_between(*v, j).iter().map(|&b| (g, b)));
        }
    }
    let map: Vec<Matrix> = (0..n)
        .map(|j| {
            let mut pi = Matrix::zeros(m.dims()[j], labels[j].len());
            for (col, &(g, b)) in labels[j].iter().enumerate() {
                let image = m.path_matrix(a.basis_path(b)).mul(&generators[g].1);
                pi.paste(0, col, &image);
            }
            pi
        })
        .collect();
    let kernel = map.iter().map(Matrix::kernel).collect();
    ProjectiveCover { generators, module, labels, map, kernel }
}

/// dim Ext^1(M, N).
pub fn ext1(a: &TruncatedAlgebra, m: &Representation, n: &Representation) -> Result<usize> {
    a.require_level(stable_truncation_level(&[m.total_dim(), n.total_dim()]))?;
    Ok(ext1_unchecked(a, m, n))
}

fn ext1_unchecked(a: &TruncatedAlgebra, m: &Representation, n: &Representation) -> usize {
    let q = a.quiver();
    let cover = projective_cover(a, m);
    let omega = cover.syzygy(q);
    let hom = hom_space(q, &omega, n);
    if hom.dim == 0 {
        return 0;
    }
    // restrictions of Hom(P_0, N) = ⊕ N_{v_g} to the syzygy
    let flat_len: usize = (0..q.n()).map(|j| n.dims()[j] * omega.dims()[j]).sum();
    let mut cols = Vec::new();
    for (g, (v, _)) in cover.generators.iter().enumerate() {
        for l in 0..n.dims()[*v] {
            let u = Matrix::unit(n.dims()[*v], l);
            let mut flat = Vec::with_capacity(flat_len);
            for j in 0..q.n() {
                let mut f = Matrix::zeros(n.dims()[j], cover.labels[j].len());
                for (col, &(gg, b)) in cover.labels[j].iter().enumerate() {
                    if gg == g {
                        f.paste(0, col, &n.path_matrix(a.basis_path(b)).mul(&u));
                    }
                }
                flat.extend(f.mul(&cover.kernel[j]).entries().iter().cloned());
            }
            cols.push(Matrix::column_vector(flat));
        }
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    let rank = Matrix::hstack(flat_len, &refs).rank();
    hom.dim - rank
}

/// Minimal injective presentation 0 -> M -> I_0 -> I_1.
#[derive(Clone, Debug)]
pub struct InjectivePresentation {
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
    pub i0_module: Representation,
    pub i1_module: Representation,
    pub f: Vec<Matrix>,
    pub g: Vec<Matrix>,
    pub cokernel: Representation,
}

fn injective_envelope(a: &TruncatedAlgebra, m: &Representation) -> (Vec<usize>, Representation, Vec<Matrix>) {
    let q = a.quiver();
    let n = q.n();
    let soc = socle_bases(q, m);
    let mut functionals: Vec<(usize, Matrix)> = Vec::new();
    for (i, s) in soc.iter().enumerate() {
        if s.cols() == 0 {
            continue;
        }
        let full = Matrix::hstack(m.dims()[i], &[s, &Matrix::complement(s)]);
        let inv = full.inverse().expect("completed basis is invertible");
        for k in 0..s.cols() {
            functionals.push((i, inv.select_rows(&[k])));
        }
    }
    let mut module = Representation::zero(q).without_strings();
    for (i, _) in &functionals {
        module = module.direct_sum(&a.injective(*i));
    }
    let f = (0..n)
        .map(|j| {
            let mut rows: Vec<Matrix> = Vec::new();
            for (i, phi) in &functionals {
                for &b in a.paths_between(j, *i) {
                    rows.push(phi.mul(&m.path_matrix(a.basis_path(b))));
                }
            }
            let refs: Vec<&Matrix> = rows.iter().collect();
            Matrix::vstack(m.dims()[j], &refs)
        })
        .collect();
    (soc.iter().map(Matrix::cols).collect(), module, f)
}

pub fn injective_presentation(a: &TruncatedAlgebra, m: &Representation) -> Result<InjectivePresentation> {
    a.require_level(stable_truncation_level(&[m.total_dim()]))?;
    let q = a.quiver();
    let (i0, i0_module, f) = injective_envelope(a, m);
    for (j, fj) in f.iter().enumerate() {
        if fj.rank() != m.dims()[j] {
            return Err(Error::InternalMismatch("injective envelope is not injective".into()));
        }
    }
    let images: Vec<Matrix> = f.iter().map(Matrix::column_space).collect();
    let (cokernel, proj) = quotient(q, &i0_module, &images);
    let (i1, i1_module, f1) = injective_envelope(a, &cokernel);
    let g = f1.iter().zip(&proj).map(|(x, p)| x.mul(p)).collect();
    Ok(InjectivePresentation { i0, i1, i0_module, i1_module, f, g, cokernel })
}

/// The inverse Auslander-Reiten translate, as Tr D over the truncation.
pub fn tau_minus(a: &TruncatedAlgebra, n: &Representation) -> Result<Representation> {
    a.require_level(stable_truncation_level(&[n.total_dim()]))?;
    Ok(tau_minus_unchecked(a, n))
}

/// Both sides of dim Hom(τ⁻N, M) = dim Hom(M, N) − dim Hom(M, I_0) + dim Hom(M, I_1)
/// for a minimal injective presentation of N.
pub fn ar_formula_sides(a: &TruncatedAlgebra, m: &Representation, n: &Representation) -> Result<(i64, i64)> {
    a.require_level(stable_truncation_level(&[m.total_dim(), n.total_dim()]))?;
    let q = a.quiver();
    let pres = injective_presentation(a, n)?;
    let lhs = hom_space(q, &tau_minus_unchecked(a, n), m).dim as i64;
    let rhs = hom_space(q, m, n).dim as i64 - hom_space(q, m, &pres.i0_module).dim as i64
        + hom_space(q, m, &pres.i1_module).dim as i64;
    Ok((lhs, rhs))
}

fn tau_minus_unchecked(a: &TruncatedAlgebra, n: &Representation) -> Representation {
    let q = a.quiver();
    let op = a.opposite();
    let qop = op.quiver();
    let dn = n.dual();
    let cover0 = projective_cover(op, &dn);
    let omega = cover0.syzygy(qop);
    let cover1 = projective_cover(op, &omega);

    // relations of the presentation, as elements of the P_0 copies
    let mut source = Representation::zero(q).without_strings();
    let mut source_labels: Vec<Vec<(usize, usize)>> = vec![Vec::new(); q.n()];
    for (k, (v, _)) in cover0.generators.iter().enumerate() {
        source = source.direct_sum(&a.projective(*v));
        for (x, l) in source_labels.iter_mut().enumerate() {
            l.extend(a.paths_between(*v, x).iter().map(|&b| (k, b)));
        }
    }
    let mut target = Representation::zero(q).without_strings();
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); q.n()];
    let mut running = vec![0usize; q.n()];
    for (j, _) in &cover1.generators {
        target = target.direct_sum(&a.projective(*j));
        for x in 0..q.n() {
            offsets[x].push(running[x]);
            running[x] += a.paths_between(*j, x).len();
        }
    }
    let relations: Vec<Vec<Rational>> = cover1
        .generators
        .iter()
        .map(|(j, w)| cover0.kernel[*j].mul(w).column(0))
        .collect();

    let images: Vec<Matrix> = (0..q.n())
        .map(|x| {
            let mut f = Matrix::zeros(target.dims()[x], source.dims()[x]);
            for (col, &(k, b)) in source_labels[x].iter().enumerate() {
                let y = a.basis_path(b);
                for (l, (j, _)) in cover1.generators.iter().enumerate() {
                    let positions: HashMap<usize, usize> =
                        a.paths_between(*j, x).iter().enumerate().map(|(r, &bb)| (bb, r)).collect();
                    for (coord, &(kk, bop)) in cover0.labels[*j].iter().enumerate() {
                        if kk != k {
                            continue;
                        }
                        let c = &relations[l][coord];
                        if c.is_zero() {
                            continue;
                        }
                        let w = op.basis_path(bop).reversed();
                        let Some(prod) = q.compose(y, &w) else { continue };
                        for (bb, d) in a.reduce_path(&prod) {
                            f[(offsets[x][l] + positions[&bb], col)] += c * &d;
                        }
                    }
                }
            }
            f.column_space()
        })
        .collect();
    quotient(q, &target, &images).0
}

/// g_i = -dim Hom(S_i, M) + dim Ext^1(S_i, M) + v_i, cross-checked against
/// the socle counts of a minimal injective presentation.
pub fn g_vector(a: &TruncatedAlgebra, x: &DecoratedRepresentation) -> Result<GVector> {
    let m = &x.module;
    a.require_level(stable_truncation_level(&[1, m.total_dim()]))?;
    let q = a.quiver();
    let by_definition: Vec<i64> = (0..q.n())
        .map(|i| {
            let s = Representation::simple(q, i);
            -(hom_space(q, &s, m).dim as i64) + ext1_unchecked(a, &s, m) as i64 + x.decoration[i] as i64
        })
        .collect();
    let pres = injective_presentation(a, m)?;
    let by_socle: Vec<i64> =
        (0..q.n()).map(|i| -(pres.i0[i] as i64) + pres.i1[i] as i64 + x.decoration[i] as i64).collect();
    if by_definition != by_socle {
        return Err(Error::InternalMismatch(format!(
            "g-vector {by_definition:?} from Hom/Ext but {by_socle:?} from socles"
        )));
    }
    Ok(GVector(by_definition))
}

/// E(X, Y) = dim Hom(M, N) + Σ dim M_i g_i(Y), cross-checked against
/// dim Hom(τ⁻N, M) + Σ dim M_i dim W_i.
pub fn e_invariant(a: &TruncatedAlgebra, x: &DecoratedRepresentation, y: &DecoratedRepresentation) -> Result<u64> {
    e_invariant_checked(a, x, y).map(|(e, _)| e)
}

/// E-invariant together with the value of the homological route, which
/// always equals it on success.
pub fn e_invariant_checked(
    a: &TruncatedAlgebra,
    x: &DecoratedRepresentation,
    y: &DecoratedRepresentation,
) -> Result<(u64, u64)> {
    let (m, n) = (&x.module, &y.module);
    let need = stable_truncation_level(&[m.total_dim(), n.total_dim()]).max(stable_truncation_level(&[1, n.total_dim()]));
    a.require_level(need)?;
    let q = a.quiver();
    let g = g_vector(a, y)?;
    let weighted: i64 = m.dims().iter().zip(&g.0).map(|(&d, &gi)| d as i64 * gi).sum();
    let definitional = hom_space(q, m, n).dim as i64 + weighted;
    let tau = tau_minus_unchecked(a, n);
    let decorated: usize = m.dims().iter().zip(&y.decoration).map(|(d, w)| d * w).sum();
    let homological = (hom_space(q, &tau, m).dim + decorated) as i64;
    if definitional != homological || definitional < 0 {
        return Err(Error::InternalMismatch(format!(
            "E-invariant {definitional} by definition but {homological} via the inverse translate"
        )));
    }
    Ok((definitional as u64, homological as u64))
}

/// End(M)/rad End(M) is one-dimensional.
pub fn is_indecomposable(q: &Quiver, m: &Representation) -> bool {
    if m.is_zero() {
        return false;
    }
    let end = hom_space(q, m, m);
    let k = end.dim;
    let flatten = |f: &[Matrix]| -> Vec<Rational> { f.iter().flat_map(|x| x.entries().iter().cloned()).collect() };
    let flat: Vec<Vec<Rational>> = end.basis.iter().map(|f| flatten(f)).collect();
    let len = flat[0].len();
    let mut basis = Matrix::zeros(len, k);
    for (j, v) in flat.iter().enumerate() {
        basis.paste(0, j, &Matrix::column_vector(v.clone()));
    }
    let coords = Coordinates::new(&basis);
    // structure constants c[x][y][z]: E_x E_y = Σ_z c E_z
    let mut c = vec![vec![Vec::new(); k]; k];
    for x in 0..k {
        for y in 0..k {
            let prod: Vec<Matrix> = end.basis[x].iter().zip(&end.basis[y]).map(|(f, g)| f.mul(g)).collect();
            c[x][y] = coords.of(&flatten(&prod));
        }
    }
    let traces: Vec<Rational> =
        (0..k).map(|z| (0..k).map(|y| c[z][y][y].clone()).fold(Rational::default(), |s, t| s + t)).collect();
    let mut form = Matrix::zeros(k, k);
    for x in 0..k {
        for y in 0..k {
            form[(x, y)] = (0..k).map(|z| &c[x][y][z] * &traces[z]).fold(Rational::default(), |s, t| s + t);
        }
    }
    form.rank() == 1
}

/// E(X, X) = 0.
pub fn is_e_rigid(a: &TruncatedAlgebra, x: &DecoratedRepresentation) -> Result<bool> {
    Ok(e_invariant(a, x, x)? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BasicAlgebra, RelationSet};
    use crate::quiver::PathCombination;
    use crate::rep::nilpotent_jordan_block;

    fn a2() -> (Quiver, TruncatedAlgebra) {
        let q = Quiver::from_triples(2, &[("a", 1, 2)]).unwrap();
        let a = BasicAlgebra::path_algebra(q.clone()).truncate(4).unwrap();
        (q, a)
    }

    fn loop_example(p: usize) -> (Quiver, TruncatedAlgebra) {
        let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        let cc = PathCombination::single(q.path(&["c", "c"]).unwrap());
        let a = BasicAlgebra::new(q.clone(), RelationSet::new(vec![cc]).unwrap()).truncate(p).unwrap();
        (q, a)
    }

    #[test]
    fn simple_homs_and_exts() {
        let (q, a) = a2();
        let (s1, s2) = (Representation::simple(&q, 0), Representation::simple(&q, 1));
        assert_eq!(hom_space(&q, &s1, &s1).dim, 1);
        assert_eq!(hom_space(&q, &s1, &s2).dim, 0);
        assert_eq!(ext1(&a, &s1, &s2).unwrap(), 1);
        assert_eq!(ext1(&a, &s2, &s1).unwrap(), 0);
        let t = tau_minus(&a, &s2).unwrap();
        assert_eq!(t.dims(), &[1, 0]);
        assert!(tau_minus(&a, &a.injective(0)).unwrap().is_zero());
        assert!(tau_minus(&a, &a.injective(1)).unwrap().is_zero());
    }

    #[test]
    fn loop_example_basics() {
        let (q, a) = loop_example(4);
        let m33 = Representation::new(
            &q,
            vec![0, 0, 2],
            vec![Matrix::zeros(0, 0), Matrix::zeros(2, 0), nilpotent_jordan_block(2)],
        )
        .unwrap();
        assert_eq!(hom_space(&q, &m33, &m33).dim, 2);
        assert_eq!(socle(&q, &m33), vec![0, 0, 1]);
        let s3 = Representation::simple(&q, 2);
        assert_eq!(ext1(&a, &s3, &s3).unwrap(), 1);
        let pres = injective_presentation(&a, &s3).unwrap();
        assert_eq!(pres.i0, vec![0, 0, 1]);
        assert_eq!(pres.i1, vec![0, 1, 1]);
        let g = g_vector(&a, &DecoratedRepresentation::undecorated(m33.clone())).unwrap();
        assert_eq!(g.0, vec![0, 2, -1]);
        let g1 = g_vector(&a, &DecoratedRepresentation::undecorated(Representation::simple(&q, 0))).unwrap();
        assert_eq!(g1.0, vec![-1, 0, 0]);
        assert!(is_indecomposable(&q, &a.injective(2)));
        assert!(!is_indecomposable(&q, &s3.direct_sum(&s3)));
    }

    #[test]
    fn ar_formula_on_injectives() {
        let (q, a) = loop_example(4);
        for i in 0..3 {
            let inj = a.injective(i);
            assert_eq!(socle(&q, &inj), (0..3).map(|j| usize::from(i == j)).collect::<Vec<_>>());
            let pres = injective_presentation(&a, &inj).unwrap();
            assert!(pres.i1.iter().all(|&x| x == 0));
        }
    }
}
