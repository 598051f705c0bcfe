//! Component graphs: vertices joined when E vanishes in both directions,
//! their maximal cliques, and the CC-cluster monomials they carry.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::TruncatedAlgebra;
use crate::cc::cc_function;
use crate::error::{Error, Result};
use crate::grassmannian::Method;
use crate::laurent::LaurentPolynomial;
use crate::rep::{check, e_invariant, g_vector, is_indecomposable, DecoratedRepresentation, GVector};

#[derive(Clone, Debug)]
pub struct ComponentVertex {
    pub label: String,
    pub g: GVector,
    pub dims: Vec<usize>,
    pub decoration: Vec<usize>,
    pub cc: Option<LaurentPolynomial>,
    pub rep: Option<DecoratedRepresentation>,
    /// E(Z, Z) for two general points of the component
    pub self_e: u64,
    /// E(Z) at a single general point
    pub full_e: u64,
}

impl ComponentVertex {
    /// A vertex known only through its numerical data.
    pub fn summary(label: String, g: GVector, dims: Vec<usize>, decoration: Vec<usize>, self_e: u64, full_e: u64) -> Self {
        ComponentVertex { label, g, dims, decoration, cc: None, rep: None, self_e, full_e }
    }

    pub fn is_e_rigid(&self) -> bool {
        self.full_e == 0
    }
}

#[derive(Clone, Debug)]
pub struct ComponentGraph {
    pub n: usize,
    pub vertices: Vec<ComponentVertex>,
    /// e_matrix[i][j] = E(Z_i, Z_j), with the self value on the diagonal
    pub e_matrix: Vec<Vec<u64>>,
    adjacency: Vec<Vec<bool>>,
}

/// A labelled representative, optionally with a second general point of the
/// same component for the diagonal E value.
#[derive(Clone, Debug)]
pub struct Representative {
    pub label: String,
    pub rep: DecoratedRepresentation,
    pub twin: Option<DecoratedRepresentation>,
}

impl Representative {
    pub fn new(label: impl Into<String>, rep: DecoratedRepresentation) -> Self {
        Representative { label: label.into(), rep, twin: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub e_rigid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopBound {
    pub max_size: usize,
    pub n: usize,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCompletion {
    /// E-rigid cliques of size n − 1 with the number of E-rigid n-cliques containing them.
    pub counts: Vec<(Vec<usize>, usize)>,
    pub holds: bool,
}

fn decorated_indecomposable(a: &TruncatedAlgebra, x: &DecoratedRepresentation) -> bool {
    let v: usize = x.decoration.iter().sum();
    if x.module.is_zero() {
        v == 1
    } else {
        v == 0 && is_indecomposable(a.quiver(), &x.module)
    }
}

/// Computes g-vectors, CC functions and all pairwise E-invariants.
pub fn build_graph(a: &TruncatedAlgebra, reps: &[Representative], method: Method, budget: u64) -> Result<ComponentGraph> {
    let mut kept: Vec<(&Representative, GVector, LaurentPolynomial)> = Vec::new();
    for r in reps {
        check(a, &r.rep.module)?;
        if !decorated_indecomposable(a, &r.rep) {
            return Err(Error::NotIndecomposable(r.label.clone()));
        }
        let g = g_vector(a, &r.rep)?;
        let cc = cc_function(a, &r.rep, method, budget)?;
        match kept.iter().find(|(_, h, _)| *h == g) {
            Some((_, _, c)) if *c == cc => continue,
            Some((other, _, _)) => return Err(Error::GVectorCollision(other.label.clone(), r.label.clone())),
            None => kept.push((r, g, cc)),
        }
    }
    let k = kept.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let values: Vec<u64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let x = &kept[i].0;
            let y = if i == j { x.twin.as_ref().unwrap_or(&x.rep) } else { &kept[j].0.rep };
            e_invariant(a, &x.rep, y)
        })
        .collect::<Result<_>>()?;
    let full: Vec<u64> = kept
        .par_iter()
        .map(|(r, _, _)| if r.twin.is_some() { e_invariant(a, &r.rep, &r.rep) } else { Ok(0) })
        .collect::<Result<_>>()?;
    let e: Vec<Vec<u64>> = values.chunks(k.max(1)).map(<[u64]>::to_vec).take(k).collect();
    let vertices = kept
        .into_iter()
        .enumerate()
        .map(|(i, (r, g, cc))| ComponentVertex {
            label: r.label.clone(),
            g,
            dims: r.rep.dims().to_vec(),
            decoration: r.rep.decoration.clone(),
            cc: Some(cc),
            rep: Some(r.rep.clone()),
            self_e: e[i][i],
            full_e: if r.twin.is_some() { full[i] } else { e[i][i] },
        })
        .collect();
    Ok(ComponentGraph::from_e_matrix(a.n(), vertices, e))
}

impl ComponentGraph {
    /// Edges where E vanishes both ways; loops where the diagonal vanishes.
    pub fn from_e_matrix(n: usize, vertices: Vec<ComponentVertex>, e_matrix: Vec<Vec<u64>>) -> Self {
        let k = vertices.len();
        let adjacency = (0..k).map(|i| (0..k).map(|j| e_matrix[i][j] == 0 && e_matrix[j][i] == 0).collect()).collect();
        ComponentGraph { n, vertices, e_matrix, adjacency }
    }

    pub fn with_adjacency(n: usize, vertices: Vec<ComponentVertex>, e_matrix: Vec<Vec<u64>>, adjacency: Vec<Vec<bool>>) -> Self {
        ComponentGraph { n, vertices, e_matrix, adjacency }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn has_loop(&self, i: usize) -> bool {
        self.adjacency[i][i]
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.has_loop(i)).collect()
    }

    /// Edges between distinct vertices, i < j.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| self.adjacent(i, j)).collect()
    }

    /// Component clusters: maximal complete subgraphs, loops ignored.
    pub fn component_clusters(&self) -> Vec<Cluster> {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut out: Vec<Cluster> = maximal_cliques(&self.adjacency, &all)
            .into_iter()
            .map(|members| {
                let e_rigid = members.iter().all(|&i| self.vertices[i].is_e_rigid());
                Cluster { members, e_rigid }
            })
            .collect();
        out.sort_by(|a, b| a.members.cmp(&b.members));
        out
    }

    /// Largest complete subgraph with a loop at every vertex.
    pub fn loop_complete_bound(&self) -> LoopBound {
        let looped = self.loops();
        let max_size = maximal_cliques(&self.adjacency, &looped).iter().map(Vec::len).max().unwrap_or(0);
        LoopBound { max_size, n: self.n, violated: max_size > self.n }
    }

    /// Each E-rigid clique of size n − 1 should lie in exactly two E-rigid cliques of size n.
    pub fn two_completion_check(&self) -> TwoCompletion {
        let rigid: Vec<usize> = (0..self.len()).filter(|&i| self.vertices[i].is_e_rigid() && self.has_loop(i)).collect();
        let mut counts = Vec::new();
        for clique in cliques_of_size(&self.adjacency, &rigid, self.n.saturating_sub(1)) {
            let extensions =
                rigid.iter().filter(|v| !clique.contains(v) && clique.iter().all(|&u| self.adjacent(u, **v))).count();
            counts.push((clique, extensions));
        }
        let holds = counts.iter().all(|(_, c)| *c == 2);
        TwoCompletion { counts, holds }
    }

    /// Products Π C(Z)^{a_Z} over the cluster with Σ a_Z ≤ bound; exponents
    /// are capped at 1 on vertices without a loop.
    pub fn cc_cluster_monomials(&self, cluster: &[usize], bound: usize) -> Result<Vec<LaurentPolynomial>> {
        let fns: Vec<&LaurentPolynomial> = cluster
            .iter()
            .map(|&i| self.vertices[i].cc.as_ref().ok_or(Error::NoCertificate))
            .collect::<Result<_>>()?;
        let caps: Vec<usize> = cluster.iter().map(|&i| if self.has_loop(i) { bound } else { 1 }).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in exponent_vectors(&caps, bound) {
            let mut prod = LaurentPolynomial::one(self.n);
            for (f, &k) in fns.iter().zip(&a) {
                prod = &prod * &f.pow(k as u32);
            }
            if seen.insert(prod.to_string()) {
                out.push(prod);
            }
        }
        Ok(out)
    }

    /// Undirected DOT text with loops; labels carry the g-vector.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\\ng={}\"];", v.label.replace('"', "\\\""), v.g);
        }
        for i in self.loops() {
            let _ = writeln!(s, "  v{i} -- v{i};");
        }
        for (i, j) in self.edges() {
            let _ = writeln!(s, "  v{i} -- v{j};");
        }
        s.push_str("}\n");
        s
    }
}

/// Each coordinate is uniformly ≥ 0 or uniformly ≤ 0.
pub fn sign_coherent<'a>(gs: impl IntoIterator<Item = &'a GVector>) -> bool {
    let mut pos: Vec<bool> = Vec::new();
    let mut neg: Vec<bool> = Vec::new();
    for g in gs {
        pos.resize(pos.len().max(g.0.len()), false);
        neg.resize(neg.len().max(g.0.len()), false);
        for (i, &x) in g.0.iter().enumerate() {
            pos[i] |= x > 0;
            neg[i] |= x < 0;
        }
    }
    pos.iter().zip(&neg).all(|(&p, &n)| !(p && n))
}

fn exponent_vectors(caps: &[usize], bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &cap in caps {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                let used: usize = prefix.iter().sum();
                (0..=cap.min(bound - used)).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out.sort_by_key(|a| (a.iter().sum::<usize>(), std::cmp::Reverse(a.clone())));
    out
}

/// Bron–Kerbosch with pivoting, restricted to `within`.
fn maximal_cliques(adj: &[Vec<bool>], within: &[usize]) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort();
            out.push(c);
            return;
        }
        let pivot = *p
            .iter()
            .chain(&x)
            .max_by_key(|&&u| p.iter().filter(|&&v| v != u && adj[u][v]).count())
            .expect("p or x nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| v == pivot || !adj[pivot][v]).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            let np: Vec<usize> = p.iter().copied().filter(|&u| u != v && adj[v][u]).collect();
            let nx: Vec<usize> = x.iter().copied().filter(|&u| u != v && adj[v][u]).collect();
            r.push(v);
            go(adj, r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    if within.is_empty() {
        return out;
    }
    go(adj, &mut Vec::new(), within.to_vec(), Vec::new(), &mut out);
    out
}

/// All cliques of exactly `size` vertices inside `within`.
fn cliques_of_size(adj: &[Vec<bool>], within: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<bool>], within: &[usize], start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..within.len() {
            let v = within[k];
            if cur.iter().all(|&u| adj[u][v]) {
                cur.push(v);
                go(adj, within, k + 1, size, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(adj, within, 0, size, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, k: usize, edges: &[(usize, usize)], loops: &[usize]) -> ComponentGraph {
        let mut e = vec![vec![1u64; k]; k];
        for &(i, j) in edges {
            e[i][j] = 0;
            e[j][i] = 0;
        }
        for &i in loops {
            e[i][i] = 0;
        }
        let vertices = (0..k)
            .map(|i| ComponentVertex::summary(format!("z{i}"), GVector(vec![0; n]), vec![0; n], vec![0; n], e[i][i], e[i][i]))
            .collect();
        ComponentGraph::from_e_matrix(n, vertices, e)
    }

    #[test]
    fn triangle_is_one_cluster() {
        let g = graph(3, 3, &[(0, 1), (1, 2), (0, 2)], &[0, 1, 2]);
        assert_eq!(g.component_clusters(), vec![Cluster { members: vec![0, 1, 2], e_rigid: true }]);
        assert_eq!(g.loop_complete_bound().max_size, 3);
    }

    #[test]
    fn path_has_two_clusters() {
        let g = graph(2, 3, &[(0, 1), (1, 2)], &[]);
        let members: Vec<Vec<usize>> = g.component_clusters().into_iter().map(|c| c.members).collect();
        assert_eq!(members, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(g.loop_complete_bound().max_size, 0);
    }

    #[test]
    fn complete_graph_has_single_completions() {
        let g = graph(2, 2, &[(0, 1)], &[0, 1]);
        let t = g.two_completion_check();
        assert!(!t.holds);
        assert!(t.counts.iter().all(|(_, c)| *c == 1));
    }

    #[test]
    fn monomial_counts() {
        let mut g = graph(2, 2, &[(0, 1)], &[0, 1]);
        g.vertices[0].cc = Some(LaurentPolynomial::variable(2, 0));
        g.vertices[1].cc = Some(LaurentPolynomial::variable(2, 1));
        assert_eq!(g.cc_cluster_monomials(&[0, 1], 2).unwrap().len(), 6);
        assert_eq!(g.cc_cluster_monomials(&[0], 3).unwrap().len(), 4);
    }

    #[test]
    fn dot_output() {
        assert_eq!(graph(1, 0, &[], &[]).to_dot(), "graph G {\n}\n");
        let dot = graph(1, 1, &[], &[0]).to_dot();
        assert_eq!(dot.matches("v0 -- v0;").count(), 1);
    }

    #[test]
    fn coherence() {
        assert!(sign_coherent([&GVector(vec![1, 0]), &GVector(vec![0, 1])]));
        assert!(!sign_coherent([&GVector(vec![-1, 2]), &GVector(vec![1, 1])]));
    }
}
