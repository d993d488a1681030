use thiserror::Error;

use crate::isotone_infer::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid cell: {0}")]
    InvalidCell(String),

    /// The boundary of `witness` does not square to zero.
    #[error("boundary does not square to zero on {witness}")]
    NotAComplex { witness: String },

    #[error("subcomplex is not closed under the boundary: {0}")]
    NotClosed(String),

    #[error("complex carries no multidegree labels")]
    MissingMultidegrees,

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("matching is not acyclic")]
    CyclicMatching,

    #[error("invalid isotone family: {0}")]
    InvalidFamily(String),

    #[error("graph violates the isotone conditions ({} diagnostics)", .0.len())]
    ConditionsFailed(Vec<Diagnostic>),

    #[error("guard exceeded: {what} is {value}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// Two characterizations that must agree did not. Always a bug.
    #[error("criterion disagreement: {0}")]
    CriterionDisagreement(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
