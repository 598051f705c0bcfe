use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("terms of a path combination have different endpoints")]
    MixedEndpoints,
    #[error("relation is not admissible: {0}")]
    NonAdmissible(String),
    #[error("truncation level must be at least 2, got {0}")]
    InvalidLevel(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("representation is not nilpotent")]
    NotNilpotent,
    #[error("truncation level {have} is too low, need at least {need}")]
    LevelTooLow { have: usize, need: usize },
    #[error("independent computations disagree: {0}")]
    InternalMismatch(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("denominator vanishes modulo {0}")]
    FieldClash(u64),
    #[error("enumeration of {needed} subspace tuples exceeds the budget of {budget}")]
    TooLarge { needed: String, budget: u64 },
    #[error("point count is not polynomial: {0}")]
    NonPolynomialCount(String),
    #[error("coordinate counting needs a string certificate")]
    NoCertificate,
    #[error("field size {0} is not a prime")]
    UnsupportedField(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("representative `{0}` is not indecomposable")]
    NotIndecomposable(String),
    #[error("`{0}` and `{1}` share a g-vector but have different CC functions")]
    GVectorCollision(String, String),
    #[error("quiver has an oriented cycle")]
    NotAcyclic,
    #[error("not a Kronecker quiver: {0}")]
    WrongShape(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("golden data unavailable: {0}")]
    Golden(String),
}

impl Error {
    /// Errors caused by malformed or inconsistent input rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidQuiver(_)
                | Error::UnknownArrow(_)
                | Error::InvalidPath(_)
                | Error::MixedEndpoints
                | Error::NonAdmissible(_)
                | Error::InvalidLevel(_)
                | Error::ShapeMismatch(_)
                | Error::RelationViolated(_)
                | Error::NotNilpotent
                | Error::InvalidWalk(_)
                | Error::Parse(_)
                | Error::NotSkewSymmetric
                | Error::NotIndecomposable(_)
                | Error::NotAcyclic
                | Error::WrongShape(_)
                | Error::DimensionMismatch(_)
                | Error::Golden(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
