use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Constraint, Polyhedron};
use crate::error::{Error, Result};
use crate::geometry::linalg::{nullspace, rank};
use crate::geometry::{QVector, Rational};

/// Scales a normal/offset pair to coprime integers so duplicates compare equal.
fn primitive(normal: &QVector, offset: &Rational) -> (Vec<BigInt>, BigInt) {
    let lcm = normal
        .iter()
        .chain(std::iter::once(offset))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = normal
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    let off = offset.numer() * (&lcm / offset.denom());
    let gcd = scaled
        .iter()
        .chain(std::iter::once(&off))
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return (scaled, off);
    }
    (scaled.iter().map(|v| v / &gcd).collect(), off / &gcd)
}

/// H-representation of the convex hull of a full-dimensional point set.
///
/// Facets are found by brute force: every affinely independent `dim`-subset
/// spans a hyperplane, which is kept when all points lie on one side. This
/// is independent of the LP machinery and only meant for small inputs.
pub fn hull_of_points(points: &[QVector]) -> Result<Polyhedron> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyPolyhedron);
    };
    let dim = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    let diffs: Vec<QVector> = points.iter().map(|p| p - first).collect();
    if rank(&diffs) < dim {
        return Err(Error::Degenerate(
            "points do not span the ambient space".into(),
        ));
    }
    if dim == 0 {
        return Polyhedron::new(0, Vec::new(), Vec::new());
    }

    let mut facets: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    for subset in (0..points.len()).combinations(dim) {
        let base = &points[subset[0]];
        let spanning: Vec<QVector> = subset[1..].iter().map(|&i| &points[i] - base).collect();
        let normals = nullspace(&spanning, dim);
        if normals.len() != 1 {
            continue;
        }
        let normal = &normals[0];
        let offset = normal.dot(base);
        let sides: Vec<Rational> = points.iter().map(|p| normal.dot(p) - &offset).collect();
        let (normal, offset) = if sides.iter().all(|s| !s.is_positive()) {
            (normal.clone(), offset)
        } else if sides.iter().all(|s| !s.is_negative()) {
            (-normal, -offset)
        } else {
            continue;
        };
        facets.insert(primitive(&normal, &offset));
    }
    let ineqs = facets
        .into_iter()
        .map(|(a, b)| {
            Constraint::new(
                a.into_iter().map(Rational::from_integer).collect(),
                Rational::from_integer(b),
            )
        })
        .collect();
    Polyhedron::new(dim, ineqs, Vec::new())
}
