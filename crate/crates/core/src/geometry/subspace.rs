use serde::Serialize;

use super::linalg::{nullspace, rank, row_basis};
use super::vector::QVector;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n`, stored as a linearly independent basis.
///
/// An empty basis is the zero subspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subspace {
    basis: Vec<QVector>,
    ambient_dim: usize,
}

impl Subspace {
    /// Wraps a basis, rejecting dependent or wrongly sized vectors.
    pub fn new(basis: Vec<QVector>, ambient_dim: usize) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
        if rank(&basis) != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(Subspace { basis, ambient_dim })
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(vectors: &[QVector], ambient_dim: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: v.dim(),
            });
        }
        Ok(Subspace {
            basis: row_basis(vectors, ambient_dim),
            ambient_dim,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            basis: Vec::new(),
            ambient_dim,
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::coordinate(ambient_dim, &(0..ambient_dim).collect::<Vec<_>>())
    }

    /// Span of the standard basis vectors with the given indices.
    ///
    /// Panics on an index outside the ambient dimension.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut axes = axes.to_vec();
        axes.sort_unstable();
        axes.dedup();
        Subspace {
            basis: axes
                .into_iter()
                .map(|k| QVector::unit(ambient_dim, k))
                .collect(),
            ambient_dim,
        }
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn contains_vector(&self, v: &QVector) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.clone());
        rank(&rows) == self.dim()
    }

    /// `other ⊆ self`, decided by comparing ranks of stacked bases.
    pub fn contains(&self, other: &Subspace) -> bool {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        rank(&rows) == self.dim()
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }

    /// Subspace of all vectors orthogonal to `self`.
    pub fn orthogonal_complement(&self) -> Subspace {
        Subspace {
            basis: nullspace(&self.basis, self.ambient_dim),
            ambient_dim: self.ambient_dim,
        }
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace {
            basis: row_basis(&rows, self.ambient_dim),
            ambient_dim: self.ambient_dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    #[test]
    fn complement_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        assert!(e1
            .orthogonal_complement()
            .same_span(&Subspace::coordinate(2, &[1])));

        let zero = Subspace::zero(3);
        assert_eq!(zero.orthogonal_complement().dim(), 3);

        let diag = Subspace::new(vec![v(&[1, 1, 0])], 3).unwrap();
        let comp = diag.orthogonal_complement();
        assert_eq!(comp.dim(), 2);
        for b in comp.basis() {
            assert!(b.dot(&diag.basis()[0]).is_zero());
        }
    }

    #[test]
    fn rejects_dependent_basis() {
        assert_eq!(
            Subspace::new(vec![v(&[1, 2]), v(&[2, 4])], 2),
            Err(Error::DependentBasis)
        );
        assert!(Subspace::new(vec![v(&[1, 2, 3])], 2).is_err());
    }

    #[test]
    fn containment() {
        let plane = Subspace::coordinate(3, &[0, 1]);
        let line = Subspace::new(vec![v(&[1, -1, 0])], 3).unwrap();
        assert!(plane.contains(&line));
        assert!(!line.contains(&plane));
        assert!(plane.contains(&Subspace::zero(3)));
        assert!(Subspace::full(3).contains(&plane));
    }
}
