//! Worked example algebras with labelled corpora of string modules.
//!
//! Labels spell out the walk of a string module: `1>2>3<2` starts at vertex 1,
//! follows two arrows forward and one backward. `-i` is the negative simple at i.

use crate::algebra::{BasicAlgebra, RelationSet, TruncatedAlgebra};
use crate::error::Result;
use crate::grassmannian::{string_module, Direction, StringDatum};
use crate::linalg::rat;
use crate::quiver::{PathCombination, Potential, Quiver};
use crate::rep::{DecoratedRepresentation, Representation};

use Direction::{Backward as B, Forward as F};

/// A corpus member: a direct sum of string modules or a negative simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Strings(Vec<StringDatum>),
    Negative(usize),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub entry: Entry,
}

impl CorpusEntry {
    pub fn string(label: &str, base: usize, walk: &[(&str, Direction)]) -> Self {
        CorpusEntry { label: label.into(), entry: Entry::Strings(vec![StringDatum::new(base, walk)]) }
    }

    pub fn negative(i: usize) -> Self {
        CorpusEntry { label: format!("-{}", i + 1), entry: Entry::Negative(i) }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self.entry, Entry::Negative(_))
    }

    /// The decorated representation over `a`, carrying its string certificate.
    pub fn decorated(&self, a: &TruncatedAlgebra) -> Result<DecoratedRepresentation> {
        match &self.entry {
            Entry::Negative(i) => {
                let mut x = DecoratedRepresentation::negative_simple(a.quiver(), *i);
                x.module = x.module.with_strings(Vec::new());
                Ok(x)
            }
            Entry::Strings(strings) => {
                let mut m = Representation::zero(a.quiver()).with_strings(Vec::new());
                for s in strings {
                    m = m.direct_sum(&string_module(a, s)?);
                }
                Ok(DecoratedRepresentation::undecorated(m))
            }
        }
    }

    pub fn total_dim(&self, q: &Quiver) -> Result<usize> {
        match &self.entry {
            Entry::Negative(_) => Ok(0),
            Entry::Strings(strings) => strings.iter().map(|s| s.vertices(q).map(|v| v.len())).sum(),
        }
    }
}

/// An algebra together with a labelled corpus.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub algebra: BasicAlgebra,
    pub corpus: Vec<CorpusEntry>,
}

impl Example {
    pub fn quiver(&self) -> &Quiver {
        &self.algebra.quiver
    }

    pub fn entry(&self, label: &str) -> Option<&CorpusEntry> {
        self.corpus.iter().find(|c| c.label == label)
    }

    /// Truncation level at which every pairwise invariant of the corpus is stable.
    pub fn stable_level(&self) -> Result<usize> {
        let q = self.quiver();
        let dims = self.corpus.iter().map(|c| c.total_dim(q)).collect::<Result<Vec<_>>>()?;
        let top = dims.into_iter().max().unwrap_or(0);
        Ok((1 + 2 * top).max(2))
    }

    pub fn truncation(&self) -> Result<TruncatedAlgebra> {
        self.algebra.truncate(self.stable_level()?)
    }

    /// Corpus entries as graph representatives over `a`.
    pub fn representatives(&self, a: &TruncatedAlgebra) -> Result<Vec<crate::graph::Representative>> {
        self.corpus.iter().map(|c| Ok(crate::graph::Representative::new(c.label.clone(), c.decorated(a)?))).collect()
    }
}

fn monomial_relations(q: &Quiver, paths: &[&[&str]]) -> Result<RelationSet> {
    let gens = paths.iter().map(|p| Ok(PathCombination::single(q.path(p)?))).collect::<Result<Vec<_>>>()?;
    RelationSet::new(gens)
}

/// a: 1→2, b: 2→3, c: 3→3 with c² = 0.
pub fn tail_with_loop() -> Result<Example> {
    let q = Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3), ("c", 3, 3)])?;
    let rels = monomial_relations(&q, &[&["c", "c"]])?;
    let s = CorpusEntry::string;
    let corpus = vec![
        s("1", 0, &[]),
        s("1>2", 0, &[("a", F)]),
        s("1>2>3>3", 0, &[("a", F), ("b", F), ("c", F)]),
        s("2", 1, &[]),
        s("3>3", 2, &[("c", F)]),
        s("2>3>3", 1, &[("b", F), ("c", F)]),
        s("1>2>3>3<2", 0, &[("a", F), ("b", F), ("c", F), ("b", B)]),
        s("1>2>3>3<2<1", 0, &[("a", F), ("b", F), ("c", F), ("b", B), ("a", B)]),
        s("2>3>3<2", 1, &[("b", F), ("c", F), ("b", B)]),
        CorpusEntry::negative(0),
        CorpusEntry::negative(1),
        CorpusEntry::negative(2),
        s("3", 2, &[]),
        s("2>3", 1, &[("b", F)]),
        s("3>3<2", 2, &[("c", F), ("b", B)]),
        s("1>2>3", 0, &[("a", F), ("b", F)]),
        s("3>3<2<1", 2, &[("c", F), ("b", B), ("a", B)]),
        s("2>3>3<2<1", 1, &[("b", F), ("c", F), ("b", B), ("a", B)]),
    ];
    Ok(Example { name: "tail-with-loop", algebra: BasicAlgebra::new(q, rels), corpus })
}

/// b: 2→1 and a loop a at 2, with ba = 0 and a free.
pub fn looped_source() -> Result<Example> {
    let q = Quiver::from_triples(2, &[("a", 2, 2), ("b", 2, 1)])?;
    let rels = monomial_relations(&q, &[&["b", "a"]])?;
    let corpus = vec![
        CorpusEntry::string("2>1", 1, &[("b", F)]),
        CorpusEntry::string("1", 0, &[]),
        CorpusEntry::negative(0),
        CorpusEntry::negative(1),
    ];
    Ok(Example { name: "looped-source", algebra: BasicAlgebra::new(q, rels), corpus })
}

/// E-rigid indecomposables of the level-2 truncation of [`looped_source`].
pub fn looped_source_level_two() -> Result<Example> {
    let mut ex = looped_source()?;
    ex.name = "looped-source-level-2";
    ex.corpus.insert(1, CorpusEntry::string("2>2", 1, &[("a", F)]));
    Ok(ex)
}

/// a: 3→2, b: 2→1 with ba = 0.
pub fn linear_a3_zero_relation() -> Result<Example> {
    let q = Quiver::from_triples(3, &[("a", 3, 2), ("b", 2, 1)])?;
    let rels = monomial_relations(&q, &[&["b", "a"]])?;
    let s = CorpusEntry::string;
    let corpus = vec![
        s("1", 0, &[]),
        s("2", 1, &[]),
        s("3", 2, &[]),
        s("2>1", 1, &[("b", F)]),
        s("3>2", 2, &[("a", F)]),
        CorpusEntry::negative(0),
        CorpusEntry::negative(1),
        CorpusEntry::negative(2),
    ];
    Ok(Example { name: "a3-zero-relation", algebra: BasicAlgebra::new(q, rels), corpus })
}

/// One vertex with a free loop c; the corpus holds the Jordan blocks M_1..M_max.
pub fn jordan_loop(max: usize) -> Result<Example> {
    let q = Quiver::from_triples(1, &[("c", 1, 1)])?;
    let corpus = (1..=max)
        .map(|d| {
            let walk = vec![("c", F); d - 1];
            CorpusEntry::string(&format!("M{d}"), 0, &walk)
        })
        .collect();
    Ok(Example { name: "jordan-loop", algebra: BasicAlgebra::path_algebra(q), corpus })
}

/// Strings of length at most `max_dim` whose modules are defined over `a`,
/// one per pair of mutually inverse walks.
pub fn strings_up_to(a: &TruncatedAlgebra, max_dim: usize) -> Vec<StringDatum> {
    let q = a.quiver();
    let letters: Vec<(String, Direction)> =
        q.arrows().iter().flat_map(|x| [(x.id.clone(), F), (x.id.clone(), B)]).collect();
    let mut frontier: Vec<StringDatum> = (0..q.n()).map(StringDatum::trivial).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    while let Some(s) = frontier.pop() {
        if string_module(a, &s).is_err() {
            continue;
        }
        let key = walk_key(&s).min(walk_key(&inverse(q, &s)));
        if seen.insert(key) {
            out.push(s.clone());
        }
        if s.walk.len() + 1 < max_dim {
            for (id, dir) in &letters {
                let backtrack = s.walk.last().is_some_and(|(last, d)| last == id && d != dir);
                if !backtrack {
                    let mut t = s.clone();
                    t.walk.push((id.clone(), *dir));
                    frontier.push(t);
                }
            }
        }
    }
    out.sort_by_key(|s| (s.walk.len(), walk_key(s)));
    out
}

fn walk_key(s: &StringDatum) -> String {
    let mut k = (s.base + 1).to_string();
    for (id, d) in &s.walk {
        k.push_str(if *d == F { ">" } else { "<" });
        k.push_str(id);
    }
    k
}

fn inverse(q: &Quiver, s: &StringDatum) -> StringDatum {
    let end = s.vertices(q).ok().and_then(|v| v.last().copied()).unwrap_or(s.base);
    let walk = s.walk.iter().rev().map(|(id, d)| (id.clone(), if *d == F { B } else { F })).collect();
    StringDatum { base: end, walk }
}

/// m arrows from vertex 1 to vertex 2.
pub fn kronecker(m: usize) -> Result<Quiver> {
    let ids: Vec<String> = (0..m).map(|k| ((b'a' + k as u8) as char).to_string()).collect();
    let triples: Vec<(&str, usize, usize)> = ids.iter().map(|s| (s.as_str(), 1, 2)).collect();
    Quiver::from_triples(2, &triples)
}

/// Indecomposable 2-Kronecker modules of dimension (k, k+1) or (k+1, k) as strings.
pub fn kronecker_string(d: &[usize]) -> Option<StringDatum> {
    let (d1, d2) = (d[0], d[1]);
    if d1 + 1 == d2 {
        let walk: Vec<(&str, Direction)> = (0..d1).flat_map(|_| [("a", B), ("b", F)]).collect();
        Some(StringDatum::new(1, &walk))
    } else if d2 + 1 == d1 {
        let walk: Vec<(&str, Direction)> = (0..d2).flat_map(|_| [("a", F), ("b", B)]).collect();
        Some(StringDatum::new(0, &walk))
    } else if d1 == 1 && d2 == 1 {
        Some(StringDatum::new(0, &[("a", F)]))
    } else {
        None
    }
}

pub fn a2() -> Result<Quiver> {
    Quiver::from_triples(2, &[("a", 1, 2)])
}

pub fn a3() -> Result<Quiver> {
    Quiver::from_triples(3, &[("a", 1, 2), ("b", 2, 3)])
}

/// Three arms pointing into vertex 4.
pub fn d4() -> Result<Quiver> {
    Quiver::from_triples(4, &[("a", 1, 4), ("b", 2, 4), ("c", 3, 4)])
}

/// Doubled triangle a_k: 1→2, b_k: 2→3, c_k: 3→1.
pub fn doubled_triangle() -> Result<Quiver> {
    Quiver::from_triples(
        3,
        &[("a1", 1, 2), ("a2", 1, 2), ("b1", 2, 3), ("b2", 2, 3), ("c1", 3, 1), ("c2", 3, 1)],
    )
}

/// c1b1a1 + c2b2a2, optionally minus c2b1a2c1b2a1.
pub fn doubled_triangle_potential(q: &Quiver, with_sextic: bool) -> Result<Potential> {
    let mut terms = vec![(rat(1), q.path(&["c1", "b1", "a1"])?), (rat(1), q.path(&["c2", "b2", "a2"])?)];
    if with_sextic {
        terms.push((rat(-1), q.path(&["c2", "b1", "a2", "c1", "b2", "a1"])?));
    }
    Potential::new(terms)
}
