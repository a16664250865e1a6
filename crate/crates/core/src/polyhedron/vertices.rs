//! Vertex enumeration for bounded polyhedra.
//!
//! Both routes first move to coordinates of the affine hull of the equality
//! rows, where every vertex is cut out by exactly `k` independent inequality
//! rows (`k` the reduced dimension). [`Polyhedron::vertices`] walks the edge
//! graph from one vertex; [`Polyhedron::vertices_by_enumeration`] tries
//! every `k`-subset of rows and serves as an oracle for it.

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::{Polyhedron, MAX_VERTEX_ENUMERATION_DIM};
use crate::error::{Error, Result};
use crate::geometry::linalg::{nullspace, solve_affine, solve_unique};
use crate::geometry::{QVector, Rational};

/// `P` in coordinates `x = x0 + K λ` of the equality hull. Rows with a zero
/// reduced normal are dropped; on a nonempty `P` they are slack constants.
struct Reduced {
    x0: QVector,
    kernel: Vec<QVector>,
    rows: Vec<(QVector, Rational)>,
}

impl Reduced {
    fn dim(&self) -> usize {
        self.kernel.len()
    }

    fn lift(&self, lambda: &QVector) -> QVector {
        self.kernel
            .iter()
            .zip(lambda.iter())
            .fold(self.x0.clone(), |acc, (v, l)| &acc + &v.scale(l))
    }

    fn feasible(&self, lambda: &QVector) -> bool {
        self.rows.iter().all(|(a, b)| a.dot(lambda) <= *b)
    }

    fn tight(&self, lambda: &QVector) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].0.dot(lambda) == self.rows[i].1)
            .collect()
    }

    fn normals(&self, set: &[usize]) -> Vec<QVector> {
        set.iter().map(|&i| self.rows[i].0.clone()).collect()
    }

    /// Largest `t >= 0` keeping `λ + t d` feasible, or `None` if unlimited.
    fn max_step(&self, lambda: &QVector, d: &QVector) -> Option<Rational> {
        self.rows
            .iter()
            .filter_map(|(a, b)| {
                let rate = a.dot(d);
                rate.is_positive().then(|| (b - a.dot(lambda)) / rate)
            })
            .min()
    }

    /// From a feasible point, repeatedly moves along the nullspace of the
    /// tight rows until they have full rank.
    fn walk_to_vertex(&self, mut lambda: QVector) -> QVector {
        loop {
            let tight = self.tight(&lambda);
            let Some(d) = nullspace(&self.normals(&tight), self.dim()).into_iter().next() else {
                return lambda;
            };
            let (d, t) = match self.max_step(&lambda, &d) {
                Some(t) => (d, t),
                None => {
                    let back = -&d;
                    let t = self.max_step(&lambda, &back).expect("bounded polyhedron");
                    (back, t)
                }
            };
            lambda = &lambda + &d.scale(&t);
        }
    }
}

impl Polyhedron {
    fn reduced(&self) -> Result<Option<Reduced>> {
        if self.dim > MAX_VERTEX_ENUMERATION_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.dim,
                limit: MAX_VERTEX_ENUMERATION_DIM,
            });
        }
        if self.is_empty() {
            return Ok(None);
        }
        if !self.is_bounded() {
            return Err(Error::UnboundedPolyhedron);
        }
        let eq_rows: Vec<QVector> = self.eqs.iter().map(|r| r.a.clone()).collect();
        let eq_rhs: Vec<Rational> = self.eqs.iter().map(|r| r.b.clone()).collect();
        let hull = solve_affine(&eq_rows, &eq_rhs, self.dim).ok_or(Error::EmptyPolyhedron)?;
        let rows = self
            .ineqs
            .iter()
            .map(|r| {
                let a: QVector = hull.kernel.iter().map(|v| r.a.dot(v)).collect();
                (a, &r.b - r.a.dot(&hull.particular))
            })
            .filter(|(a, _)| !a.is_zero())
            .collect();
        Ok(Some(Reduced {
            x0: hull.particular,
            kernel: hull.kernel,
            rows,
        }))
    }

    /// All vertices, lexicographically sorted; empty for an empty polyhedron.
    ///
    /// Breadth-first search over the edge graph: at a vertex, every edge
    /// lies in the nullspace of some `k-1` independent tight rows, and the
    /// ratio test along it gives the neighbouring vertex.
    pub fn vertices(&self) -> Result<Vec<QVector>> {
        let Some(red) = self.reduced()? else {
            return Ok(Vec::new());
        };
        let k = red.dim();
        if k == 0 {
            return Ok(vec![red.x0.clone()]);
        }
        let reduced_poly = Polyhedron {
            dim: k,
            ineqs: red
                .rows
                .iter()
                .map(|(a, b)| super::Constraint::new(a.clone(), b.clone()))
                .collect(),
            eqs: Vec::new(),
        };
        let start = red.walk_to_vertex(reduced_poly.feasible_point()?);
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let tight = red.tight(&v);
            for subset in tight.iter().copied().combinations(k - 1) {
                let normals = red.normals(&subset);
                let line = nullspace(&normals, k);
                if line.len() != 1 {
                    continue;
                }
                for d in [line[0].clone(), -&line[0]] {
                    let Some(t) = red.max_step(&v, &d) else {
                        continue;
                    };
                    if t.is_zero() {
                        continue;
                    }
                    let w = &v + &d.scale(&t);
                    if seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let found: BTreeSet<QVector> = seen.iter().map(|l| red.lift(l)).collect();
        Ok(found.into_iter().collect())
    }

    /// Same result as [`Polyhedron::vertices`], by solving every
    /// `k`-subset of rows and keeping the feasible unique solutions.
    pub fn vertices_by_enumeration(&self) -> Result<Vec<QVector>> {
        let Some(red) = self.reduced()? else {
            return Ok(Vec::new());
        };
        let k = red.dim();
        if k == 0 {
            return Ok(vec![red.x0.clone()]);
        }
        let mut found = BTreeSet::new();
        for subset in (0..red.rows.len()).combinations(k) {
            let normals = red.normals(&subset);
            let rhs: Vec<Rational> = subset.iter().map(|&i| red.rows[i].1.clone()).collect();
            if let Some(lambda) = solve_unique(&normals, &rhs, k) {
                if red.feasible(&lambda) {
                    found.insert(red.lift(&lambda));
                }
            }
        }
        Ok(found.into_iter().collect())
    }
}
