use thiserror::Error;

/// Errors raised by the lattice-polytope operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no primitive direction: zero vector")]
    NoPrimitiveDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} vectors, found {found}")]
    WrongVectorCount { expected: usize, found: usize },
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },
    #[error("empty input")]
    EmptyInput,
    #[error("input spans a {dim}-dimensional affine subspace of R^{ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("not a lattice polytope")]
    NotLatticePolytope,
    #[error("not smooth: {0}")]
    NotSmooth(String),
    #[error("not disjoint")]
    NotDisjoint,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    #[error("not Minkowski-equivalent smooth cubes")]
    NotEquivalentSmoothCubes,
    #[error("not a prismatoid")]
    NotPrismatoid,
    #[error("non-integer slice heights: bottom {bottom}, top {top}")]
    NonIntegralHeights { bottom: String, top: String },
    #[error("invalid face label: {0}")]
    InvalidLabel(String),
    #[error("axis {0} is not fixed by the label")]
    AxisNotFixed(usize),
    #[error("coordinate range too large to enumerate")]
    EnumerationOverflow,
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationExhausted { attempts: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
