//! Quivers, paths, potentials and cyclic derivatives.
//!
//! Vertices are indexed from 0 in the API and printed from 1. A path stores
//! its arrows leftmost first, so `[c, b, a]` is the composite `cba` that
//! runs `a`, then `b`, then `c`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuiver("a quiver needs at least one vertex".into()));
        }
        let mut index = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            if a.id.is_empty() {
                return Err(Error::InvalidQuiver("empty arrow id".into()));
            }
            if a.source >= n || a.target >= n {
                return Err(Error::InvalidQuiver(format!("arrow `{}` leaves the vertex range", a.id)));
            }
            if index.insert(a.id.clone(), k).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow id `{}`", a.id)));
            }
        }
        Ok(Quiver { n, arrows, index })
    }

    /// Convenience constructor from `(id, source, target)` triples with 1-based vertices.
    pub fn from_triples(n: usize, triples: &[(&str, usize, usize)]) -> Result<Self> {
        let arrows = triples
            .iter()
            .map(|&(id, s, t)| {
                if s == 0 || t == 0 {
                    return Err(Error::InvalidQuiver("vertices are numbered from 1".into()));
                }
                Ok(Arrow { id: id.to_string(), source: s - 1, target: t - 1 })
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(n, arrows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &Arrow {
        &self.arrows[k]
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    /// The opposite quiver: same ids, reversed arrows.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { id: a.id.clone(), source: a.target, target: a.source })
            .collect();
        Quiver { n: self.n, arrows, index: self.index.clone() }
    }

    /// b_ij = #{arrows j -> i} - #{arrows i -> j}.
    pub fn b_matrix(&self) -> Vec<Vec<i64>> {
        let mut b = vec![vec![0i64; self.n]; self.n];
        for a in &self.arrows {
            if a.source != a.target {
                b[a.target][a.source] += 1;
                b[a.source][a.target] -= 1;
            }
        }
        b
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Vertices ordered so that every arrow goes forward, if possible.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..self.n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn trivial_path(&self, v: usize) -> Path {
        Path { start: v, end: v, arrows: Vec::new() }
    }

    /// Builds a path from arrow ids written leftmost first (`["b", "a"]` is `ba`).
    pub fn path(&self, ids: &[&str]) -> Result<Path> {
        let arrows = ids.iter().map(|id| self.arrow_index(id)).collect::<Result<Vec<_>>>()?;
        self.path_from_indices(arrows)
    }

    /// Nonempty path from arrow indices, leftmost first.
    pub fn path_from_indices(&self, arrows: Vec<usize>) -> Result<Path> {
        let (Some(&last), Some(&first)) = (arrows.first(), arrows.last()) else {
            return Err(Error::InvalidPath("use trivial_path for paths of length 0".into()));
        };
        for w in arrows.windows(2) {
            if self.arrows[w[0]].source != self.arrows[w[1]].target {
                return Err(Error::InvalidPath(format!(
                    "`{}` cannot follow `{}`",
                    self.arrows[w[0]].id, self.arrows[w[1]].id
                )));
            }
        }
        Ok(Path { start: self.arrows[first].source, end: self.arrows[last].target, arrows })
    }

    /// `outer · inner`: run `inner` first. None if the endpoints do not match.
    pub fn compose(&self, outer: &Path, inner: &Path) -> Option<Path> {
        if inner.end != outer.start {
            return None;
        }
        let mut arrows = outer.arrows.clone();
        arrows.extend_from_slice(&inner.arrows);
        Some(Path { start: inner.start, end: outer.end, arrows })
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e{}", p.start + 1)
        } else {
            p.arrows.iter().map(|&k| self.arrows[k].id.as_str()).collect::<Vec<_>>().join("")
        }
    }

    /// Arrow ids of a path, leftmost first.
    pub fn path_ids(&self, p: &Path) -> Vec<String> {
        p.arrows.iter().map(|&k| self.arrows[k].id.clone()).collect()
    }

    /// All paths of length at most `max_len`, sorted by length then arrow sequence.
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.n).map(|v| self.trivial_path(v)).collect();
        let mut layer: Vec<Path> = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &layer {
                for (k, a) in self.arrows.iter().enumerate() {
                    if a.source == p.end {
                        let mut arrows = Vec::with_capacity(p.len() + 1);
                        arrows.push(k);
                        arrows.extend_from_slice(&p.arrows);
                        next.push(Path { start: p.start, end: a.target, arrows });
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A path in a quiver. Arrows are arrow indices, leftmost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: usize,
    end: usize,
    arrows: Vec<usize>,
}

impl Path {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        !self.arrows.is_empty() && self.start == self.end
    }

    /// The same arrows read in the opposite quiver.
    pub fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path { start: self.end, end: self.start, arrows }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.start.cmp(&other.start))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathCombination {
    terms: Vec<(Rational, Path)>,
}

impl PathCombination {
    /// Merges duplicates and drops zero coefficients.
    pub fn new(terms: Vec<(Rational, Path)>) -> Result<Self> {
        let mut acc: BTreeMap<Path, Rational> = BTreeMap::new();
        for (c, p) in terms {
            *acc.entry(p).or_insert_with(Rational::zero) += c;
        }
        let terms: Vec<(Rational, Path)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect();
        if let Some((_, first)) = terms.first() {
            if terms.iter().any(|(_, p)| p.start != first.start || p.end != first.end) {
                return Err(Error::MixedEndpoints);
            }
        }
        Ok(PathCombination { terms })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: Path) -> Self {
        PathCombination { terms: vec![(Rational::from_integer(1.into()), p)] }
    }

    pub fn terms(&self) -> &[(Rational, Path)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// (start, end) shared by all terms.
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        self.terms.first().map(|(_, p)| (p.start, p.end))
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.iter().map(|(_, p)| p.len()).min()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::new(t)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PathCombination { terms: self.terms.iter().map(|(a, p)| (a * c, p.clone())).collect() }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let name = q.path_name(p);
            let one = Rational::from_integer(1.into());
            let neg = c < &Rational::zero();
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let abs = if neg { -c.clone() } else { c.clone() };
            if abs != one {
                s.push_str(&format!("{abs}*"));
            }
            s.push_str(&name);
        }
        s
    }
}

/// Finite potential: a combination of cycles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Potential {
    terms: Vec<(Rational, Path)>,
}

impl Potential {
    pub fn new(terms: Vec<(Rational, Path)>) -> Result<Self> {
        for (_, p) in &terms {
            if !p.is_cycle() {
                return Err(Error::InvalidPath("potential terms must be cycles of length at least 1".into()));
            }
        }
        Ok(Potential { terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect() })
    }

    pub fn terms(&self) -> &[(Rational, Path)] {
        &self.terms
    }

}

/// Cyclic derivative of `w` with respect to the arrow with index `a`.
pub fn cyclic_derivative(q: &Quiver, w: &Potential, a: usize) -> PathCombination {
    let mut out = Vec::new();
    for (c, cycle) in &w.terms {
        let l = &cycle.arrows;
        for (j, &x) in l.iter().enumerate() {
            if x != a {
                continue;
            }
            let mut word: Vec<usize> = l[j + 1..].to_vec();
            word.extend_from_slice(&l[..j]);
            let path = if word.is_empty() {
                q.trivial_path(q.arrow(a).target)
            } else {
                q.path_from_indices(word).expect("rotations of cycles compose")
            };
            out.push((c.clone(), path));
        }
    }
    PathCombination::new(out).expect("derivative terms run from t(a) to s(a)")
}

/// One relation per arrow, zero derivatives omitted.
pub fn jacobian_relations(q: &Quiver, w: &Potential) -> Result<Vec<PathCombination>> {
    let mut out = Vec::new();
    for a in 0..q.arrows().len() {
        let d = cyclic_derivative(q, w, a);
        if d.is_zero() {
            continue;
        }
        if d.min_len().unwrap_or(2) < 2 {
            return Err(Error::NonAdmissible(format!(
                "derivative by `{}` is {}",
                q.arrow(a).id,
                d.display(q)
            )));
        }
        out.push(d);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn cyclic() -> Quiver {
        Quiver::from_triples(
            3,
            &[("a1", 1, 2), ("a2", 1, 2), ("b1", 2, 3), ("b2", 2, 3), ("c1", 3, 1), ("c2", 3, 1)],
        )
        .unwrap()
    }

    fn w1(q: &Quiver) -> Potential {
        Potential::new(vec![
            (rat(1), q.path(&["c1", "b1", "a1"]).unwrap()),
            (rat(1), q.path(&["c2", "b2", "a2"]).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn b_matrix_of_loop_example() {
        let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        assert_eq!(q.b_matrix(), vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]]);
        let k = Quiver::from_triples(2, &[("a", 1, 2), ("b", 1, 2)]).unwrap();
        assert_eq!(k.b_matrix(), vec![vec![0, -2], vec![2, 0]]);
        let e = Quiver::new(2, vec![]).unwrap();
        assert_eq!(e.b_matrix(), vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn path_enumeration() {
        let lp = Quiver::from_triples(1, &[("c", 1, 1)]).unwrap();
        let names: Vec<String> = lp.enumerate_paths(2).iter().map(|p| lp.path_name(p)).collect();
        assert_eq!(names, ["e1", "c", "cc"]);
        let a2 = Quiver::from_triples(2, &[("a", 1, 2)]).unwrap();
        assert_eq!(a2.enumerate_paths(3).len(), 3);
        let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)]).unwrap();
        let names: Vec<String> = q.enumerate_paths(3).iter().map(|p| q.path_name(p)).collect();
        assert_eq!(names, ["e1", "e2", "e3", "a", "b", "c", "ba", "cb", "cc", "cba", "ccb", "ccc"]);
    }

    #[test]
    fn derivatives_of_w1() {
        let q = cyclic();
        let w = w1(&q);
        let d = |id: &str| cyclic_derivative(&q, &w, q.arrow_index(id).unwrap()).display(&q);
        assert_eq!(d("a1"), "c1b1");
        assert_eq!(d("c1"), "b1a1");
        assert_eq!(d("b1"), "a1c1");
        let single = Potential::new(vec![(rat(1), q.path(&["c1", "b1", "a1"]).unwrap())]).unwrap();
        assert!(cyclic_derivative(&q, &single, q.arrow_index("c2").unwrap()).is_zero());
        let rels = jacobian_relations(&q, &w).unwrap();
        let shown: Vec<String> = rels.iter().map(|r| r.display(&q)).collect();
        assert_eq!(shown, ["c1b1", "c2b2", "a1c1", "a2c2", "b1a1", "b2a2"]);
    }

    #[test]
    fn derivatives_of_w2() {
        let q = cyclic();
        let mut terms = w1(&q).terms().to_vec();
        terms.push((rat(-1), q.path(&["c2", "b1", "a2", "c1", "b2", "a1"]).unwrap()));
        let w = Potential::new(terms).unwrap();
        let rels = jacobian_relations(&q, &w).unwrap();
        assert_eq!(rels.len(), 6);
        for r in &rels {
            let lens: Vec<usize> = r.terms().iter().map(|(_, p)| p.len()).collect();
            assert_eq!(lens, [2, 5]);
        }
    }

    #[test]
    fn loop_potential_is_not_admissible() {
        let q = Quiver::from_triples(1, &[("c", 1, 1)]).unwrap();
        let w = Potential::new(vec![(rat(1), q.path(&["c", "c"]).unwrap())]).unwrap();
        assert!(matches!(jacobian_relations(&q, &w), Err(Error::NonAdmissible(_))));
        let empty = Potential::default();
        assert!(jacobian_relations(&q, &empty).unwrap().is_empty());
    }
}
