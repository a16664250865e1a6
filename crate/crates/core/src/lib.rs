//! Exact-arithmetic block-coordinate minimization over polyhedra.
//!
//! Points, subspaces and polyhedra carry arbitrary-precision rationals. On
//! top of an exact simplex solver the crate implements face queries, the
//! block-coordinate update rules (plain and relative-interior), their
//! fixed-point classifiers, an epigraph reduction for piecewise-affine
//! objectives and a small pairwise-model diffusion demo.

pub mod demo;
pub mod descent;
pub mod diffusion;
pub mod epigraph;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lp;
pub mod polyhedron;
pub mod random;
pub mod suites;

pub use descent::{Classification, DirectionSet, Picker, Rule, Schedule, StopCriteria, Trace};
pub use error::{Error, Result};
pub use geometry::{QVector, Rational, Segment, Subspace};
pub use io::Instance;
pub use lp::{LinearObjective, LpOutcome, LpSolution, LpStatus};
pub use polyhedron::{Constraint, FaceDescriptor, FaceRelation, Polyhedron, RiStrategy};
