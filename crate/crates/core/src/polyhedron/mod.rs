//! Polyhedra in H-representation and their face structure.
//!
//! A [`Polyhedron`] is `{x : a_i.x <= b_i, e_j.x = d_j}`. Faces are
//! identified by [`FaceDescriptor`]s: the set of inequality rows tight on the
//! whole face. The descriptor computed at a point `x` is the tight set of `x`
//! itself, which is already canonical because `x` is slack on every other row
//! and so lies in the relative interior of the face it defines.

mod faces;
mod hull;
mod vertices;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::linalg::rank;
use crate::geometry::{int, serde_rational, QVector, Rational, Subspace};
use crate::lp::{self, LinearObjective, LpOutcome};

pub use faces::{face_lattice, squared_distance};
pub use hull::hull_of_points;

/// Vertex enumeration refuses anything larger.
pub const MAX_VERTEX_ENUMERATION_DIM: usize = 6;

/// One linear row `a.x <= b` (or `a.x = b` in the equality list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub a: QVector,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

impl Constraint {
    pub fn new(a: QVector, b: Rational) -> Self {
        Constraint { a, b }
    }

    /// `b - a.x`
    pub fn slack(&self, x: &QVector) -> Rational {
        &self.b - self.a.dot(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    ineqs: Vec<Constraint>,
    eqs: Vec<Constraint>,
}

/// Relation of `F(P, y)` to `F(P, x)` in [`Polyhedron::face_relation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FaceRelation {
    /// `F(y) = F(x)`, i.e. `y` lies in `ri F(x)`.
    EqualFace,
    /// `F(y)` is a proper face of `F(x)`, i.e. `y` lies in `rb F(x)`.
    ProperSubface,
    /// `F(x)` is a proper face of `F(y)`.
    ProperSuperface,
    Incomparable,
}

/// Canonical description of a face: every inequality tight on all of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceDescriptor {
    pub tight_set: BTreeSet<usize>,
    pub dim: usize,
}

impl FaceDescriptor {
    /// `self ⊆ other` as faces (reversed inclusion of tight sets).
    pub fn is_subface_of(&self, other: &FaceDescriptor) -> bool {
        self.tight_set.is_superset(&other.tight_set)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiStrategy {
    /// Average of one slack-maximizing point per non-implicit row.
    #[default]
    SlackAverage,
    /// Average of all vertices; bounded polyhedra only.
    #[serde(alias = "barycenter")]
    VertexBarycenter,
}

impl Polyhedron {
    pub fn new(dim: usize, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Result<Self> {
        if let Some(row) = ineqs.iter().chain(&eqs).find(|r| r.a.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.a.dim(),
            });
        }
        Ok(Polyhedron { dim, ineqs, eqs })
    }

    /// Integer-coefficient convenience constructor: `(a, b)` pairs.
    pub fn from_rows(dim: usize, ineqs: &[(&[i64], i64)], eqs: &[(&[i64], i64)]) -> Result<Self> {
        let conv = |rows: &[(&[i64], i64)]| {
            rows.iter()
                .map(|(a, b)| Constraint::new(QVector::from_ints(a), int(*b)))
                .collect()
        };
        Self::new(dim, conv(ineqs), conv(eqs))
    }

    /// `{x : 0 <= x_k <= 1}`.
    pub fn unit_cube(dim: usize) -> Self {
        let mut ineqs = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            ineqs.push(Constraint::new(QVector::unit(dim, k), int(1)));
            ineqs.push(Constraint::new(-&QVector::unit(dim, k), int(0)));
        }
        Polyhedron {
            dim,
            ineqs,
            eqs: Vec::new(),
        }
    }

    pub fn universe(dim: usize) -> Self {
        Polyhedron {
            dim,
            ineqs: Vec::new(),
            eqs: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn ineqs(&self) -> &[Constraint] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Constraint] {
        &self.eqs
    }

    pub fn with_equalities(&self, extra: Vec<Constraint>) -> Polyhedron {
        let mut p = self.clone();
        p.eqs.extend(extra);
        p
    }

    pub fn with_inequalities(&self, extra: Vec<Constraint>) -> Polyhedron {
        let mut p = self.clone();
        p.ineqs.extend(extra);
        p
    }

    /// Intersection; inequality indices of `self` are preserved.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        self.check_dim(other.dim)?;
        let mut p = self.clone();
        p.ineqs.extend(other.ineqs.iter().cloned());
        p.eqs.extend(other.eqs.iter().cloned());
        Ok(p)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    fn check_point(&self, x: &QVector) -> Result<()> {
        self.check_dim(x.dim())?;
        if !self.contains(x) {
            return Err(Error::PointNotInPolyhedron);
        }
        Ok(())
    }

    pub fn contains(&self, x: &QVector) -> bool {
        x.dim() == self.dim
            && self.ineqs.iter().all(|r| !r.slack(x).is_negative())
            && self.eqs.iter().all(|r| r.slack(x).is_zero())
    }

    /// Indices of inequality rows tight at `x`.
    pub fn tight_set(&self, x: &QVector) -> BTreeSet<usize> {
        self.ineqs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.solve(&QVector::zeros(self.dim)), LpOutcome::Infeasible)
    }

    fn solve(&self, c: &QVector) -> LpOutcome {
        lp::solve(self, &LinearObjective::new(c.clone())).expect("objective sized to polyhedron")
    }

    /// Any feasible point.
    pub fn feasible_point(&self) -> Result<QVector> {
        match self.solve(&QVector::zeros(self.dim)) {
            LpOutcome::Optimal(s) => Ok(s.point),
            _ => Err(Error::EmptyPolyhedron),
        }
    }

    /// Maximizes `sum_{i in candidates} s_i` subject to `a_i.x + s_i <= b_i`,
    /// `0 <= s_i <= 1`, and the remaining rows of `self`.
    ///
    /// Returns the optimal value and point, or `None` when `self` is empty.
    fn max_total_slack(&self, candidates: &[usize]) -> Option<(Rational, QVector)> {
        let n = self.dim;
        let k = candidates.len();
        let lift = |a: &QVector, extra: Option<usize>| {
            let mut coords = a.coords().to_vec();
            coords.resize(n + k, Rational::zero());
            if let Some(j) = extra {
                coords[n + j] = Rational::one();
            }
            QVector::new(coords)
        };
        let mut slot = vec![None; self.ineqs.len()];
        for (j, &i) in candidates.iter().enumerate() {
            slot[i] = Some(j);
        }
        let mut ineqs: Vec<Constraint> = self
            .ineqs
            .iter()
            .zip(&slot)
            .map(|(r, s)| Constraint::new(lift(&r.a, *s), r.b.clone()))
            .collect();
        for j in 0..k {
            let e = QVector::unit(n + k, n + j);
            ineqs.push(Constraint::new(e.clone(), Rational::one()));
            ineqs.push(Constraint::new(-&e, Rational::zero()));
        }
        let eqs = self
            .eqs
            .iter()
            .map(|r| Constraint::new(lift(&r.a, None), r.b.clone()))
            .collect();
        let lifted = Polyhedron {
            dim: n + k,
            ineqs,
            eqs,
        };
        let mut c = vec![Rational::zero(); n + k];
        for v in c.iter_mut().skip(n) {
            *v = -Rational::one();
        }
        match lifted.solve(&QVector::new(c)) {
            LpOutcome::Optimal(s) => {
                let x = QVector::new(s.point.coords()[..n].to_vec());
                Some((-s.value, x))
            }
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("slack variables are capped"),
        }
    }

    /// Inequality rows satisfied with equality by every point of `self`.
    ///
    /// Repeatedly maximizes the total (capped) slack of the still-undecided
    /// rows; rows that gain slack are non-implicit, and once no slack can be
    /// gained the remaining rows are exactly the implicit ones.
    pub fn implicit_equalities(&self) -> Result<BTreeSet<usize>> {
        Ok(self.implicit_with_witnesses(&[])?.0)
    }

    /// [`Polyhedron::implicit_equalities`], skipping the rows that are slack
    /// at one of the `known` points (which must lie in `self`).
    pub fn implicit_equalities_near(&self, known: &[QVector]) -> Result<BTreeSet<usize>> {
        Ok(self.implicit_with_witnesses(known)?.0)
    }

    /// Implicit rows, plus for every other row a feasible point (index into
    /// the returned list) at which that row has positive slack.
    fn implicit_with_witnesses(
        &self,
        known: &[QVector],
    ) -> Result<(BTreeSet<usize>, Vec<QVector>, Vec<Option<usize>>)> {
        let mut witness = vec![None; self.ineqs.len()];
        let mut points = Vec::new();
        let mut candidates: Vec<usize> = (0..self.ineqs.len()).collect();
        let mut record = |candidates: &mut Vec<usize>, points: &mut Vec<QVector>, x: QVector| {
            candidates.retain(|&i| {
                let tight = self.ineqs[i].slack(&x).is_zero();
                if !tight {
                    witness[i] = Some(points.len());
                }
                tight
            });
            points.push(x);
        };
        for x in known {
            debug_assert!(self.contains(x));
            record(&mut candidates, &mut points, x.clone());
        }
        while !candidates.is_empty() {
            let (value, x) = self
                .max_total_slack(&candidates)
                .ok_or(Error::EmptyPolyhedron)?;
            if value.is_zero() {
                if points.is_empty() {
                    points.push(x);
                }
                return Ok((candidates.into_iter().collect(), points, witness));
            }
            record(&mut candidates, &mut points, x);
        }
        if points.is_empty() {
            points.push(self.feasible_point()?);
        }
        Ok((BTreeSet::new(), points, witness))
    }

    /// Dimension of the affine hull.
    pub fn dimension(&self) -> Result<usize> {
        let implicit = self.implicit_equalities()?;
        Ok(self.dim - self.rank_of(&implicit))
    }

    /// Dimension of the affine hull given the implicit rows.
    pub(crate) fn dimension_given(&self, implicit: &BTreeSet<usize>) -> usize {
        self.dim - self.rank_of(implicit)
    }

    /// [`Polyhedron::ri_membership`] given the implicit rows.
    pub(crate) fn ri_membership_given(&self, x: &QVector, implicit: &BTreeSet<usize>) -> bool {
        self.contains(x) && self.tight_set(x).is_subset(implicit)
    }

    fn rank_of(&self, tight: &BTreeSet<usize>) -> usize {
        let rows: Vec<QVector> = tight
            .iter()
            .map(|&i| self.ineqs[i].a.clone())
            .chain(self.eqs.iter().map(|r| r.a.clone()))
            .collect();
        rank(&rows)
    }

    /// `F(P, x)`: the smallest face containing `x`.
    pub fn smallest_face(&self, x: &QVector) -> Result<FaceDescriptor> {
        self.check_point(x)?;
        let tight_set = self.tight_set(x);
        let dim = self.dim - self.rank_of(&tight_set);
        Ok(FaceDescriptor { tight_set, dim })
    }

    /// The face `{x in P : a_i.x = b_i for i in tight}` as a polyhedron.
    ///
    /// Inequality indices are preserved, so the tight rows reappear as
    /// implicit equalities of the result.
    pub fn face_polyhedron(&self, tight: &BTreeSet<usize>) -> Polyhedron {
        self.with_equalities(tight.iter().map(|&i| self.ineqs[i].clone()).collect())
    }

    /// Canonical descriptor of the face cut out by an arbitrary row set
    /// (closing it under implicitness), or `None` if that face is empty.
    pub fn canonical_face(&self, tight: &BTreeSet<usize>) -> Option<FaceDescriptor> {
        let face = self.face_polyhedron(tight);
        let tight_set = face.implicit_equalities().ok()?;
        let dim = self.dim - self.rank_of(&tight_set);
        Some(FaceDescriptor { tight_set, dim })
    }

    /// Intersection of two faces, `None` when they are disjoint.
    pub fn meet(&self, a: &FaceDescriptor, b: &FaceDescriptor) -> Option<FaceDescriptor> {
        let union = a.tight_set.union(&b.tight_set).copied().collect();
        self.canonical_face(&union)
    }

    pub fn face_relation(&self, x: &QVector, y: &QVector) -> Result<FaceRelation> {
        let fx = self.smallest_face(x)?;
        let fy = self.smallest_face(y)?;
        Ok(
            match (
                fy.tight_set.is_superset(&fx.tight_set),
                fx.tight_set.is_superset(&fy.tight_set),
            ) {
                (true, true) => FaceRelation::EqualFace,
                (true, false) => FaceRelation::ProperSubface,
                (false, true) => FaceRelation::ProperSuperface,
                (false, false) => FaceRelation::Incomparable,
            },
        )
    }

    /// `x ∈ ri P`: `x ∈ P` and every row tight at `x` is an implicit
    /// equality of `P`.
    pub fn ri_membership(&self, x: &QVector) -> bool {
        if !self.contains(x) {
            return false;
        }
        let tight: Vec<usize> = self.tight_set(x).into_iter().collect();
        if tight.is_empty() {
            return true;
        }
        matches!(self.max_total_slack(&tight), Some((v, _)) if v.is_zero())
    }

    pub fn relative_interior_point(&self, strategy: RiStrategy) -> Result<QVector> {
        match strategy {
            RiStrategy::SlackAverage => self.slack_average_point(),
            RiStrategy::VertexBarycenter => {
                let vertices = self.vertices()?;
                QVector::mean(&vertices).ok_or(Error::EmptyPolyhedron)
            }
        }
    }

    /// Uniform average over the non-implicit rows of one point with positive
    /// slack on that row; the points come from the implicit-row search.
    fn slack_average_point(&self) -> Result<QVector> {
        let (_, points, witness) = self.implicit_with_witnesses(&[])?;
        let chosen: Vec<&QVector> = witness.iter().flatten().map(|&k| &points[k]).collect();
        match QVector::mean(chosen) {
            Some(p) => Ok(p),
            None => Ok(points[0].clone()),
        }
    }

    /// `P ∩ (x + I)`, as `P` plus the equalities `N y = N x` for a basis `N`
    /// of the orthogonal complement of `I`.
    pub fn restrict_to_affine(&self, x: &QVector, space: &Subspace) -> Result<Polyhedron> {
        self.check_dim(space.ambient_dim())?;
        self.check_point(x)?;
        let normals = space.orthogonal_complement();
        Ok(self.with_equalities(
            normals
                .basis()
                .iter()
                .map(|nv| Constraint::new(nv.clone(), nv.dot(x)))
                .collect(),
        ))
    }

    /// A point `u ∈ P` with `x ∈ ri [y, u]`, extending the segment from `y`
    /// through `x` by half of the largest feasible step (capped at one).
    /// `None` when no extension beyond `x` stays in `P`.
    pub fn prolong(&self, x: &QVector, y: &QVector) -> Result<Option<QVector>> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Ok(Some(x.clone()));
        }
        let dir = x - y;
        let mut step = Rational::one();
        for row in &self.ineqs {
            let rate = row.a.dot(&dir);
            if rate.is_positive() {
                let limit = row.slack(x) / rate;
                if limit < step {
                    step = limit;
                }
            }
        }
        if step.is_zero() {
            return Ok(None);
        }
        let half = step / int(2);
        Ok(Some(x + &dir.scale(&half)))
    }

    /// Whether the (nonempty or empty) polyhedron has no recession direction.
    ///
    /// The recession cone `{d : A d <= 0, E d = 0}` is trivial iff the rows
    /// have full rank and no `d` in the cone makes any row strictly negative.
    pub fn is_bounded(&self) -> bool {
        let rows: Vec<QVector> = self
            .ineqs
            .iter()
            .chain(&self.eqs)
            .map(|r| r.a.clone())
            .collect();
        if rank(&rows) < self.dim {
            return false;
        }
        let cone = Polyhedron {
            dim: self.dim,
            ineqs: self
                .ineqs
                .iter()
                .map(|r| Constraint::new(r.a.clone(), Rational::zero()))
                .collect(),
            eqs: self
                .eqs
                .iter()
                .map(|r| Constraint::new(r.a.clone(), Rational::zero()))
                .collect(),
        };
        let total = self
            .ineqs
            .iter()
            .fold(QVector::zeros(self.dim), |acc, r| &acc + &r.a);
        matches!(cone.solve(&total), LpOutcome::Optimal(_))
    }
}

#[cfg(test)]
mod tests;
