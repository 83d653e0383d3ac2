use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bilinear form is degenerate")]
    DegenerateForm,

    #[error("operator is not a rational scalar plus a nilpotent")]
    NotScalarPlusNilpotent,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid phi: {0}")]
    InvalidPhi(String),

    #[error("bad gamma: {0}")]
    BadGamma(String),

    #[error("bad xi: {0}")]
    BadXi(String),

    #[error("not a derivation: D[e{i},e{j}] != [De{i},e{j}] + [e{i},De{j}]")]
    NotDerivation { i: usize, j: usize },

    #[error("derivation is not skew: B(De{i},e{j}) + B(e{i},De{j}) != 0")]
    NotSkew { i: usize, j: usize },

    #[error("compatibility failed: {0}")]
    CompatibilityFailed(String),

    #[error("bad center vector: {0}")]
    BadCenterVector(String),

    #[error("map is not in the centroid span: {0}")]
    NotInCentroid(String),

    #[error("condition ({condition}) failed: {witness}")]
    ConditionFailed {
        condition: &'static str,
        witness: String,
    },

    #[error("Lie algebra is not perfect")]
    NotPerfect,

    #[error("element has nil index {found:?}, expected {expected}")]
    WrongNilIndex {
        expected: usize,
        found: Option<usize>,
    },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
