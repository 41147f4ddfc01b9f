use thiserror::Error;

use crate::face::{Face, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} outside the universe [1, {n}]")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("vertex universe size {0} unsupported (need 1 <= n <= 64)")]
    BadUniverse(usize),

    #[error("face {0} is not a face of the complex")]
    NotAFace(Face),

    #[error("the empty face is not allowed here")]
    EmptyFace,

    #[error("vertex {0} already belongs to the complex")]
    VertexInUse(VertexId),

    #[error("operation needs a complex of dimension >= {required}, got {actual}")]
    DimensionTooSmall { required: isize, actual: isize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(isize, isize),

    #[error("not a subcomplex: face {0} is missing from the ambient complex")]
    NotSubcomplex(Face),

    #[error("invalid ridge sum: {0}")]
    InvalidRidgeSum(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("internal error: {0}")]
    Internal(String),
}
