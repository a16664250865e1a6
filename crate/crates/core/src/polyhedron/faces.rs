use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Zero;

use super::{FaceDescriptor, Polyhedron, MAX_VERTEX_ENUMERATION_DIM};
use crate::error::{Error, Result};
use crate::geometry::linalg::{rref, solve_unique};
use crate::geometry::{QVector, Rational};

/// Every nonempty face of a polytope, sorted by descriptor.
///
/// Each face's tight set is the intersection of the tight sets of its
/// vertices, so the family is the closure of the vertex tight sets under
/// pairwise intersection.
pub fn face_lattice(p: &Polyhedron) -> Result<Vec<FaceDescriptor>> {
    let vertices = p.vertices()?;
    let mut family: BTreeSet<BTreeSet<usize>> = vertices.iter().map(|v| p.tight_set(v)).collect();
    loop {
        let current: Vec<_> = family.iter().cloned().collect();
        let mut grew = false;
        for (a, b) in current.iter().tuple_combinations() {
            let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
            grew |= family.insert(meet);
        }
        if !grew {
            break;
        }
    }
    Ok(family
        .into_iter()
        .map(|tight_set| {
            let dim = p.ambient_dim() - p.rank_of(&tight_set);
            FaceDescriptor { tight_set, dim }
        })
        .collect())
}

/// Orthogonal projection of `x` onto `{y : G y = h}`, if consistent.
fn project_onto_affine(rows: &[QVector], rhs: &[Rational], x: &QVector) -> Option<QVector> {
    let n = x.dim();
    let augmented = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.coords().to_vec();
            v.push(b.clone());
            v
        })
        .collect();
    let red = rref(augmented, n + 1);
    if red.pivots.last() == Some(&n) {
        return None;
    }
    let basis: Vec<QVector> = red
        .rows
        .iter()
        .map(|r| QVector::new(r[..n].to_vec()))
        .collect();
    if basis.is_empty() {
        return Some(x.clone());
    }
    let residual: Vec<Rational> = red
        .rows
        .iter()
        .zip(&basis)
        .map(|(r, g)| g.dot(x) - &r[n])
        .collect();
    let gram: Vec<QVector> = basis
        .iter()
        .map(|gi| basis.iter().map(|gj| gi.dot(gj)).collect())
        .collect();
    let lambda = solve_unique(&gram, &residual, basis.len())?;
    let shift = basis
        .iter()
        .zip(lambda.iter())
        .filter(|(_, l)| !l.is_zero())
        .fold(QVector::zeros(n), |acc, (g, l)| &acc + &g.scale(l));
    Some(x - &shift)
}

/// Exact squared Euclidean distance from `x` to `p`.
///
/// The nearest point lies in the relative interior of some face, and is the
/// projection of `x` onto that face's affine hull; projections onto every
/// affine set cut out by at most `dim` rows are tried and the feasible ones
/// compared.
pub fn squared_distance(p: &Polyhedron, x: &QVector) -> Result<Rational> {
    if x.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: x.dim(),
        });
    }
    if p.ambient_dim() > MAX_VERTEX_ENUMERATION_DIM {
        return Err(Error::DimensionTooLarge {
            dim: p.ambient_dim(),
            limit: MAX_VERTEX_ENUMERATION_DIM,
        });
    }
    if p.contains(x) {
        return Ok(Rational::zero());
    }
    let eq_rows: Vec<QVector> = p.eqs().iter().map(|r| r.a.clone()).collect();
    let eq_rhs: Vec<Rational> = p.eqs().iter().map(|r| r.b.clone()).collect();
    let mut best: Option<Rational> = None;
    for size in 0..=p.ambient_dim().min(p.ineqs().len()) {
        for subset in (0..p.ineqs().len()).combinations(size) {
            let mut rows = eq_rows.clone();
            let mut rhs = eq_rhs.clone();
            for &i in &subset {
                rows.push(p.ineqs()[i].a.clone());
                rhs.push(p.ineqs()[i].b.clone());
            }
            let Some(y) = project_onto_affine(&rows, &rhs, x) else {
                continue;
            };
            if !p.contains(&y) {
                continue;
            }
            let d = (x - &y).norm_squared();
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    }
    best.ok_or(Error::EmptyPolyhedron)
}
