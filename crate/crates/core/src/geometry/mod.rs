//! Exact rational scalars, vectors, subspaces and segments.

pub mod linalg;
mod rational;
mod segment;
mod subspace;
mod vector;

pub use rational::{
    format_rational, int, parse_rational, rat, serde_rational, to_f64, ParseRationalError, Rational,
};
pub use segment::{in_relative_interior_of_segment, xyzu_witness, Segment};
pub use subspace::Subspace;
pub use vector::QVector;

pub use linalg::rank;

/// Basis of the orthogonal complement of `space`.
pub fn orthogonal_complement(space: &Subspace) -> Subspace {
    space.orthogonal_complement()
}
