//! Path algebras of acyclic quivers: Euler form, Coxeter matrix, generic
//! extensions, canonical decompositions and the resulting component graph.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::graph::{ComponentGraph, ComponentVertex};
use crate::linalg::{Matrix, Rational};
use crate::quiver::Quiver;
use crate::rep::GVector;

/// E_ij = δ_ij − #{arrows i → j}.
pub fn euler_matrix(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    if !q.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let n = q.n();
    let mut e: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for a in q.arrows() {
        e[a.source][a.target] -= 1;
    }
    Ok(e)
}

/// ⟨d, e⟩ = Σ d_i e_i − Σ_a d_{s(a)} e_{t(a)}.
pub fn euler_form(q: &Quiver, d: &[i64], e: &[i64]) -> Result<i64> {
    let m = euler_matrix(q)?;
    Ok(bilinear(&m, d, e))
}

fn bilinear(m: &[Vec<i64>], d: &[i64], e: &[i64]) -> i64 {
    m.iter().enumerate().map(|(i, row)| row.iter().enumerate().map(|(j, x)| d[i] * x * e[j]).sum::<i64>()).sum()
}

/// φ = −E^{−T} E, acting on column vectors.
pub fn coxeter_matrix(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    let e = euler_matrix(q)?;
    let n = q.n();
    let flat: Vec<i64> = e.iter().flatten().copied().collect();
    let em = Matrix::from_i64(n, n, &flat);
    let inv_t = em.transpose().inverse().expect("Euler matrix is unitriangular up to ordering");
    let phi = inv_t.mul(&em).scale(&Rational::from_integer((-1).into()));
    Ok((0..n).map(|i| (0..n).map(|j| integral(&phi[(i, j)])).collect()).collect())
}

fn integral(x: &Rational) -> i64 {
    i64::try_from(x.to_integer()).expect("small integral entry")
}

fn apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn invert(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let flat: Vec<i64> = m.iter().flatten().copied().collect();
    let inv = Matrix::from_i64(n, n, &flat).inverse().expect("Coxeter matrix is invertible");
    (0..n).map(|i| (0..n).map(|j| integral(&inv[(i, j)])).collect()).collect()
}

/// Number of parallel arrows 1 → 2, if the quiver is a generalized Kronecker quiver.
pub fn kronecker_arrows(q: &Quiver) -> Result<usize> {
    let m = q.arrows().len();
    if q.n() != 2 || m < 2 || q.arrows().iter().any(|a| a.source != 0 || a.target != 1) {
        return Err(Error::WrongShape(format!("{} vertices and {} arrows", q.n(), m)));
    }
    Ok(m)
}

/// Integer dimension vector.
pub type Root = Vec<i64>;
type DimPair = (Vec<usize>, Vec<usize>);

/// The sequences p_0, p_1, ... and q_0, q_1, ... of real Schur roots of an
/// m-Kronecker quiver, k_max + 1 terms each.
pub fn kronecker_roots(q: &Quiver, k_max: usize) -> Result<(Vec<Root>, Vec<Root>)> {
    let m = kronecker_arrows(q)? as i64;
    let phi = coxeter_matrix(q)?;
    let phi_inv = invert(&phi);
    let run = |seeds: [Vec<i64>; 2], step: &[Vec<i64>]| -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(k_max + 1);
        let mut cur = seeds;
        for k in 0..=k_max {
            out.push(cur[k % 2].clone());
            if k % 2 == 1 {
                cur = [apply(step, &cur[0]), apply(step, &cur[1])];
            }
        }
        out
    };
    let p = run([vec![0, 1], vec![1, m]], &phi);
    let qs = run([vec![1, 0], vec![m, 1]], &phi_inv);
    Ok((p, qs))
}

/// d lies in the imaginary cone: d_2 ≠ 0 and d_1² + d_2² − m d_1 d_2 ≤ 0.
pub fn imaginary_region(q: &Quiver, d: &[i64]) -> Result<bool> {
    let m = kronecker_arrows(q)? as i64;
    if d.len() != 2 {
        return Err(Error::DimensionMismatch(format!("expected 2 entries, got {}", d.len())));
    }
    Ok(d[1] != 0 && d[0] * d[0] + d[1] * d[1] - m * d[0] * d[1] <= 0)
}

/// Generic homological data of an acyclic quiver, memoized.
#[derive(Debug)]
pub struct Hereditary {
    quiver: Quiver,
    euler: Vec<Vec<i64>>,
    ext_memo: Mutex<HashMap<DimPair, i64>>,
    canon_memo: Mutex<HashMap<Vec<usize>, Vec<Vec<usize>>>>,
}

impl Hereditary {
    pub fn new(quiver: Quiver) -> Result<Self> {
        let euler = euler_matrix(&quiver)?;
        Ok(Hereditary { quiver, euler, ext_memo: Mutex::default(), canon_memo: Mutex::default() })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn euler(&self, d: &[usize], e: &[usize]) -> i64 {
        bilinear(&self.euler, &signed(d), &signed(e))
    }

    /// Dimension of Ext¹ between general representations.
    pub fn generic_ext(&self, a: &[usize], b: &[usize]) -> i64 {
        if is_zero(a) || is_zero(b) {
            return 0;
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(&v) = self.ext_memo.lock().expect("memo").get(&key) {
            return v;
        }
        let mut best = 0;
        for sub in crate::grassmannian::sub_vectors(a) {
            if is_zero(&sub) || !self.is_generic_sub(&sub, a) {
                continue;
            }
            best = best.max(-self.euler(&sub, b));
        }
        self.ext_memo.lock().expect("memo").insert(key, best);
        best
    }

    /// A general representation of dimension `a` has a subrepresentation of dimension `sub`.
    pub fn is_generic_sub(&self, sub: &[usize], a: &[usize]) -> bool {
        if is_zero(sub) || sub == a {
            return true;
        }
        let rest: Vec<usize> = a.iter().zip(sub).map(|(x, y)| x - y).collect();
        self.generic_ext(sub, &rest) == 0
    }

    /// Generic hom dimension: ⟨a, b⟩ + ext(a, b).
    pub fn generic_hom(&self, a: &[usize], b: &[usize]) -> i64 {
        self.euler(a, b) + self.generic_ext(a, b)
    }

    /// Schur roots whose general representations sum to a general one of
    /// dimension `d`, sorted lexicographically.
    pub fn canonical_decomposition(&self, d: &[usize]) -> Vec<Vec<usize>> {
        if is_zero(d) {
            return Vec::new();
        }
        if let Some(v) = self.canon_memo.lock().expect("memo").get(d) {
            return v.clone();
        }
        let mut out = vec![d.to_vec()];
        for alpha in crate::grassmannian::sub_vectors(d) {
            if is_zero(&alpha) || alpha == d {
                continue;
            }
            let beta: Vec<usize> = d.iter().zip(&alpha).map(|(x, y)| x - y).collect();
            if self.generic_ext(&alpha, &beta) == 0 && self.generic_ext(&beta, &alpha) == 0 {
                out = self.canonical_decomposition(&alpha);
                out.extend(self.canonical_decomposition(&beta));
                out.sort();
                break;
            }
        }
        self.canon_memo.lock().expect("memo").insert(d.to_vec(), out.clone());
        out
    }

    pub fn is_schur_root(&self, d: &[usize]) -> bool {
        !is_zero(d) && self.canonical_decomposition(d) == [d.to_vec()]
    }

    /// General representations of dimensions d1 and d2 have no extensions in either direction.
    pub fn summand_compatible(&self, d1: &[usize], d2: &[usize]) -> bool {
        let sum: Vec<usize> = d1.iter().zip(d2).map(|(x, y)| x + y).collect();
        let mut joined = self.canonical_decomposition(d1);
        joined.extend(self.canonical_decomposition(d2));
        joined.sort();
        self.canonical_decomposition(&sum) == joined
    }

    /// Two general representations of a Schur root have no extensions.
    pub fn has_loop(&self, d: &[usize]) -> bool {
        let double: Vec<usize> = d.iter().map(|x| 2 * x).collect();
        self.canonical_decomposition(&double) == [d.to_vec(), d.to_vec()]
    }

    /// g-vector of a general representation: g_i = −⟨e_i, d⟩.
    pub fn g_vector(&self, d: &[usize]) -> GVector {
        let n = d.len();
        GVector((0..n).map(|i| -self.euler(&unit(n, i), d)).collect())
    }

    /// Graph on Schur roots of total size at most `bound` and the negative simples.
    pub fn component_graph(&self, bound: usize) -> ComponentGraph {
        let n = self.quiver.n();
        let roots: Vec<Vec<usize>> = vectors_up_to(n, bound).into_iter().filter(|d| self.is_schur_root(d)).collect();
        let mut vertices = Vec::new();
        for d in &roots {
            let self_e = self.generic_ext(d, d) as u64;
            let full_e = (1 - self.euler(d, d)) as u64;
            vertices.push(ComponentVertex::summary(label(d), self.g_vector(d), d.clone(), vec![0; n], self_e, full_e));
        }
        for i in 0..n {
            let mut g = vec![0; n];
            g[i] = 1;
            vertices.push(ComponentVertex::summary(format!("-e{}", i + 1), GVector(g), vec![0; n], unit(n, i), 0, 0));
        }
        let k = roots.len();
        let total = vertices.len();
        let mut e = vec![vec![0u64; total]; total];
        let mut adj = vec![vec![false; total]; total];
        for x in 0..total {
            for y in 0..total {
                let (dx, dy) = (&vertices[x].dims, &vertices[y].dims);
                e[x][y] = match (x < k, y < k) {
                    (true, true) => self.generic_ext(dx, dy) as u64,
                    (true, false) => dx[y - k] as u64,
                    (false, _) => 0,
                };
                adj[x][y] = match (x < k, y < k) {
                    (true, true) if x == y => self.has_loop(dx),
                    (true, true) => self.summand_compatible(dx, dy),
                    (true, false) => dx[y - k] == 0,
                    (false, true) => dy[x - k] == 0,
                    (false, false) => true,
                };
            }
        }
        ComponentGraph::with_adjacency(n, vertices, e, adj)
    }
}

fn is_zero(d: &[usize]) -> bool {
    d.iter().all(|&x| x == 0)
}

fn signed(d: &[usize]) -> Vec<i64> {
    d.iter().map(|&x| x as i64).collect()
}

fn unit(n: usize, i: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn label(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// All nonzero d ∈ N^n with Σ d ≤ bound, ordered by total size, then lexicographically.
pub fn vectors_up_to(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = crate::grassmannian::sub_vectors(&vec![bound; n])
        .into_iter()
        .filter(|d| {
            let s: usize = d.iter().sum();
            s >= 1 && s <= bound
        })
        .collect();
    out.sort_by_key(|d| (d.iter().sum::<usize>(), d.clone()));
    out
}
