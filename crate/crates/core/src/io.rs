//! JSON documents for quivers, algebras and representations.
//!
//! Vertices are numbered from 1 in every document. Rational entries may be
//! written as integers or as strings such as `"-3/4"`.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{stable_truncation_level, BasicAlgebra, RelationSet, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::grassmannian::{string_module, Direction, StringDatum};
use crate::linalg::{Matrix, Rational};
use crate::quiver::{Arrow, PathCombination, Potential, Quiver};
use crate::rep::{DecoratedRepresentation, Representation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Scalar::Int(k) => Ok(Rational::from_integer((*k).into())),
            Scalar::Text(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r = Rational::from_str(t).map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    pub vertices: usize,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
}

impl QuiverDoc {
    pub fn build(&self) -> Result<Quiver> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                if a.from == 0 || a.to == 0 {
                    return Err(Error::InvalidQuiver(format!("arrow `{}`: vertices are numbered from 1", a.id)));
                }
                Ok(Arrow { id: a.id.clone(), source: a.from - 1, target: a.to - 1 })
            })
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(self.vertices, arrows)
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverDoc {
            vertices: q.n(),
            arrows: q.arrows().iter().map(|a| ArrowDoc { id: a.id.clone(), from: a.source + 1, to: a.target + 1 }).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: Scalar,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    pub coeff: Scalar,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub quiver: QuiverDoc,
    #[serde(default)]
    pub relations: Vec<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub potential: Vec<CycleDoc>,
    #[serde(default)]
    pub finite: bool,
}

/// A parsed algebra document.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub algebra: BasicAlgebra,
    pub truncation: Option<usize>,
    pub finite: bool,
}

impl AlgebraSpec {
    pub fn quiver(&self) -> &Quiver {
        &self.algebra.quiver
    }

    /// The truncation to compute with. Unless the document asks for the finite
    /// algebra Λ_p itself, the level is raised until invariants of modules with
    /// the given total dimensions are stable.
    pub fn level_for(&self, dims: &[usize]) -> Result<TruncatedAlgebra> {
        if self.finite {
            let p = self.truncation.ok_or_else(|| Error::Parse("a finite algebra needs a truncation level".into()))?;
            return Ok(self.algebra.truncate(p)?.into_finite());
        }
        let need = stable_truncation_level(dims);
        self.algebra.truncate(self.truncation.unwrap_or(need).max(need))
    }
}

impl AlgebraDoc {
    pub fn build(&self) -> Result<AlgebraSpec> {
        let q = self.quiver.build()?;
        let mut gens = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            let terms = rel
                .iter()
                .map(|t| Ok((t.coeff.to_rational()?, path_of(&q, &t.path)?)))
                .collect::<Result<Vec<_>>>()?;
            gens.push(PathCombination::new(terms)?);
        }
        if !self.potential.is_empty() {
            let terms = self
                .potential
                .iter()
                .map(|t| Ok((t.coeff.to_rational()?, path_of(&q, &t.cycle)?)))
                .collect::<Result<Vec<_>>>()?;
            gens.extend(crate::quiver::jacobian_relations(&q, &Potential::new(terms)?)?);
        }
        if let Some(p) = self.truncation {
            if p < 2 {
                return Err(Error::InvalidLevel(p));
            }
        }
        Ok(AlgebraSpec {
            algebra: BasicAlgebra::new(q, RelationSet::new(gens)?),
            truncation: self.truncation,
            finite: self.finite,
        })
    }
}

fn path_of(q: &Quiver, ids: &[String]) -> Result<crate::quiver::Path> {
    if ids.is_empty() {
        return Err(Error::InvalidPath("relation terms need at least one arrow".into()));
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    q.path(&refs)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterDoc {
    pub arrow: String,
    pub dir: Direction,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringDoc {
    pub base: usize,
    #[serde(default)]
    pub walk: Vec<LetterDoc>,
}

impl StringDoc {
    pub fn build(&self) -> Result<StringDatum> {
        if self.base == 0 {
            return Err(Error::InvalidWalk("vertices are numbered from 1".into()));
        }
        Ok(StringDatum { base: self.base - 1, walk: self.walk.iter().map(|l| (l.arrow.clone(), l.dir)).collect() })
    }
}

/// A decorated representation, given by matrices, by strings, or by both.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, Vec<Vec<Scalar>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub string: Option<StringDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strings: Option<Vec<StringDoc>>,
}

impl RepDoc {
    fn string_data(&self) -> Result<Vec<StringDatum>> {
        self.string.iter().chain(self.strings.iter().flatten()).map(StringDoc::build).collect()
    }

    fn has_strings(&self) -> bool {
        self.string.is_some() || self.strings.is_some()
    }

    /// Dimension vector declared by the document, before any algebra is chosen.
    pub fn dims(&self, q: &Quiver) -> Result<Vec<usize>> {
        if let Some(d) = &self.dims {
            if d.len() != q.n() {
                return Err(Error::ShapeMismatch(format!("expected {} dimensions, got {}", q.n(), d.len())));
            }
            return Ok(d.clone());
        }
        if self.has_strings() {
            let mut d = vec![0; q.n()];
            for s in self.string_data()? {
                for v in s.vertices(q)? {
                    d[v] += 1;
                }
            }
            return Ok(d);
        }
        if self.decoration.is_some() {
            return Ok(vec![0; q.n()]);
        }
        Err(Error::Parse("a representation needs `dims`, `string` or `strings`".into()))
    }

    pub fn total_dim(&self, q: &Quiver) -> Result<usize> {
        Ok(self.dims(q)?.iter().sum())
    }

    pub fn build(&self, a: &TruncatedAlgebra) -> Result<DecoratedRepresentation> {
        let q = a.quiver();
        let dims = self.dims(q)?;
        let strings = self.string_data()?;
        let module = match &self.matrices {
            Some(mats) => {
                let m = matrices_to_rep(q, &dims, mats)?;
                if self.has_strings() {
                    m.with_strings(strings)
                } else {
                    m
                }
            }
            None if self.has_strings() => {
                let mut m = Representation::zero(q).with_strings(Vec::new());
                for s in &strings {
                    m = m.direct_sum(&string_module(a, s)?);
                }
                if m.dims() != dims.as_slice() {
                    return Err(Error::ShapeMismatch("`dims` disagrees with the strings".into()));
                }
                m
            }
            None => matrices_to_rep(q, &dims, &BTreeMap::new())?,
        };
        crate::rep::check(a, &module)?;
        let decoration = self.decoration.clone().unwrap_or_else(|| vec![0; q.n()]);
        DecoratedRepresentation::new(module, decoration)
    }

    pub fn from_rep(q: &Quiver, x: &DecoratedRepresentation) -> Self {
        let matrices = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let m = x.module.map(k);
                let rows = (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| Scalar::Text(m[(i, j)].to_string())).collect())
                    .collect();
                (a.id.clone(), rows)
            })
            .collect();
        RepDoc {
            dims: Some(x.dims().to_vec()),
            decoration: Some(x.decoration.clone()),
            matrices: Some(matrices),
            string: None,
            strings: None,
        }
    }
}

fn matrices_to_rep(q: &Quiver, dims: &[usize], mats: &BTreeMap<String, Vec<Vec<Scalar>>>) -> Result<Representation> {
    if dims.len() != q.n() {
        return Err(Error::ShapeMismatch(format!("expected {} dimensions, got {}", q.n(), dims.len())));
    }
    for id in mats.keys() {
        q.arrow_index(id)?;
    }
    let mut maps = Vec::with_capacity(q.arrows().len());
    for a in q.arrows() {
        let (rows, cols) = (dims[a.target], dims[a.source]);
        let m = match mats.get(&a.id) {
            None => Matrix::zeros(rows, cols),
            Some(entries) => {
                let ok_rows = entries.len() == rows || (rows == 0 && entries.is_empty());
                if !ok_rows || entries.iter().any(|r| r.len() != cols) {
                    return Err(Error::ShapeMismatch(format!(
                        "matrix of `{}` must be {rows}×{cols}",
                        a.id
                    )));
                }
                let parsed = entries
                    .iter()
                    .map(|r| r.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_rows(rows, cols, parsed)
            }
        };
        maps.push(m);
    }
    Representation::new(q, dims.to_vec(), maps)
}

/// A labelled entry of a representatives file; `twin` is a second general
/// point of the same component.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledRepDoc {
    pub label: String,
    pub rep: RepDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twin: Option<RepDoc>,
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_algebra(text: &str) -> Result<AlgebraSpec> {
    from_json::<AlgebraDoc>(text)?.build()
}

pub fn read_quiver(text: &str) -> Result<Quiver> {
    from_json::<QuiverDoc>(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALG: &str = r#"{
        "quiver": {"vertices": 3, "arrows": [
            {"id": "a", "from": 1, "to": 2}, {"id": "b", "from": 2, "to": 3}, {"id": "c", "from": 3, "to": 3}]},
        "relations": [[{"coeff": "1", "path": ["c", "c"]}]],
        "truncation": 4
    }"#;

    #[test]
    fn algebra_document() {
        let spec = read_algebra(ALG).unwrap();
        let a = spec.level_for(&[1]).unwrap();
        assert_eq!(a.level(), 4);
        assert_eq!(a.dim(), 9);
        assert_eq!(spec.level_for(&[3, 3]).unwrap().level(), 7);
    }

    #[test]
    fn representation_by_matrices_and_by_string() {
        let spec = read_algebra(ALG).unwrap();
        let a = spec.level_for(&[2]).unwrap();
        let by_matrix: RepDoc =
            from_json(r#"{"dims": [0,0,2], "matrices": {"c": [["0","0"],[1,0]]}}"#).unwrap();
        let by_string: RepDoc = from_json(r#"{"string": {"base": 3, "walk": [{"arrow": "c", "dir": "fwd"}]}}"#).unwrap();
        let x = by_matrix.build(&a).unwrap();
        let y = by_string.build(&a).unwrap();
        assert_eq!(x.module.maps(), y.module.maps());
        assert_eq!(y.module.strings().map(<[_]>::len), Some(1));
    }

    #[test]
    fn malformed_inputs() {
        let spec = read_algebra(ALG).unwrap();
        let a = spec.level_for(&[2]).unwrap();
        let bad: RepDoc = from_json(r#"{"dims": [0,0,2], "matrices": {"c": [["0"]]}}"#).unwrap();
        assert!(matches!(bad.build(&a), Err(Error::ShapeMismatch(_))));
        let unknown: RepDoc = from_json(r#"{"dims": [0,0,1], "matrices": {"z": [[1]]}}"#).unwrap();
        assert!(matches!(unknown.build(&a), Err(Error::UnknownArrow(_))));
        let violates: RepDoc = from_json(r#"{"dims": [0,0,1], "matrices": {"c": [[1]]}}"#).unwrap();
        assert!(violates.build(&a).is_err());
        assert!(read_algebra(r#"{"quiver": {"vertices": 0}}"#).is_err());
        assert!(from_json::<RepDoc>(r#"{"dims": [1], "colour": 3}"#).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn potential_document() {
        let text = r#"{
            "quiver": {"vertices": 3, "arrows": [
                {"id": "a", "from": 1, "to": 2}, {"id": "b", "from": 2, "to": 3}, {"id": "c", "from": 3, "to": 1}]},
            "potential": [{"coeff": 1, "cycle": ["c", "b", "a"]}]
        }"#;
        let spec = read_algebra(text).unwrap();
        assert_eq!(spec.algebra.relations.generators().len(), 3);
        assert_eq!(spec.level_for(&[1]).unwrap().dim(), 6);
    }
}
