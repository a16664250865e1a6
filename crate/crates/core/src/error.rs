use thiserror::Error;

use crate::lp::LpStatus;

/// Failures raised by the geometric and optimization operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("polyhedron is unbounded")]
    UnboundedPolyhedron,

    #[error("point does not lie in the polyhedron")]
    PointNotInPolyhedron,

    #[error("ambient dimension {dim} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("linear program has no optimum ({0:?})")]
    NotOptimal(LpStatus),

    #[error("objective is unbounded below along a search direction")]
    UnboundedDirection,

    #[error("subspace basis is linearly dependent")]
    DependentBasis,

    #[error("invalid witness parameters: {0}")]
    InvalidWitness(String),

    #[error("invalid direction set: {0}")]
    InvalidDirections(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("model too large: {0}")]
    ModelTooLarge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
