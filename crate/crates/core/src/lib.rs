//! Exact computation of representation-theoretic invariants of quivers with
//! relations: g-vectors, E-invariants, Caldero-Chapoton functions, component
//! graphs and canonical decompositions.

pub mod algebra;
pub mod catalog;
pub mod cc;
pub mod error;
pub mod graph;
pub mod grassmannian;
pub mod hereditary;
pub mod io;
pub mod laurent;
pub mod linalg;
pub mod quiver;
pub mod rep;
pub mod verify;

pub use algebra::{BasicAlgebra, RelationSet, TruncatedAlgebra};
pub use cc::{bq_conditions, cc_function, linear_independence, BqReport};
pub use error::{Error, Result};
pub use graph::{build_graph, ComponentGraph, Representative};
pub use grassmannian::{euler_char, Method, StringDatum};
pub use hereditary::Hereditary;
pub use laurent::LaurentPolynomial;
pub use quiver::{Path, PathCombination, Potential, Quiver};
pub use rep::{DecoratedRepresentation, GVector, Representation};
