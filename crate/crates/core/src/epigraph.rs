//! Convex piecewise-affine objectives via their epigraph.
//!
//! Minimizing `f(x) = max_k (g_k.x + h_k)` over `X` is the same as
//! minimizing the last coordinate `t` over `{(x, t) : x in X, f(x) <= t}`.
//! The `t` coordinate is always appended last.

use serde::{de, Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{int, serde_rational, QVector, Rational, Subspace};
use crate::lp::{self, LinearObjective, LpOutcome};
use crate::polyhedron::{Constraint, Polyhedron};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub g: QVector,
    #[serde(with = "serde_rational")]
    pub h: Rational,
}

impl AffinePiece {
    pub fn eval(&self, x: &QVector) -> Rational {
        self.g.dot(x) + &self.h
    }
}

/// `f(x) = max_k (g_k.x + h_k)` with at least one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseAffine {
    pieces: Vec<AffinePiece>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PiecewiseJson {
    pieces: Vec<AffinePiece>,
}

impl<'de> Deserialize<'de> for PiecewiseAffine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PiecewiseJson::deserialize(d)?;
        PiecewiseAffine::new(raw.pieces).map_err(de::Error::custom)
    }
}

impl PiecewiseAffine {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidModel(
                "piecewise function has no pieces".into(),
            ));
        };
        let n = first.g.dim();
        if let Some(p) = pieces.iter().find(|p| p.g.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.g.dim(),
            });
        }
        Ok(PiecewiseAffine { pieces })
    }

    pub fn linear(c: QVector) -> Self {
        PiecewiseAffine {
            pieces: vec![AffinePiece { g: c, h: int(0) }],
        }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].g.dim()
    }

    pub fn eval(&self, x: &QVector) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .max()
            .expect("at least one piece")
    }
}

/// `min t` over the epigraph of `f` restricted to `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpigraphProblem {
    pub lifted: Polyhedron,
    pub objective: LinearObjective,
}

impl EpigraphProblem {
    pub fn base_dim(&self) -> usize {
        self.lifted.ambient_dim() - 1
    }
}

fn lift_row(row: &Constraint) -> Constraint {
    Constraint::new(row.a.extended(int(0)), row.b.clone())
}

/// Rows of `X` with a zero `t` column, plus `g_k.x - t <= -h_k` per piece.
pub fn lift(x: &Polyhedron, f: &PiecewiseAffine) -> Result<EpigraphProblem> {
    let n = x.ambient_dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    let ineqs = x
        .ineqs()
        .iter()
        .map(lift_row)
        .chain(
            f.pieces
                .iter()
                .map(|p| Constraint::new(p.g.extended(int(-1)), -&p.h)),
        )
        .collect();
    let eqs = x.eqs().iter().map(lift_row).collect();
    Ok(EpigraphProblem {
        lifted: Polyhedron::new(n + 1, ineqs, eqs)?,
        objective: LinearObjective::new(QVector::unit(n + 1, n)),
    })
}

/// `(x, f(x))`.
pub fn lift_point(f: &PiecewiseAffine, x: &QVector) -> QVector {
    x.extended(f.eval(x))
}

/// `I × R`: the basis of `I` padded with a zero, plus the `t` axis.
pub fn lift_direction(space: &Subspace) -> Subspace {
    let n = space.ambient_dim();
    let mut basis: Vec<QVector> = space.basis().iter().map(|v| v.extended(int(0))).collect();
    basis.push(QVector::unit(n + 1, n));
    Subspace::new(basis, n + 1).expect("t axis is independent of the padded basis")
}

/// Drops the trailing `t` coordinate.
pub fn project_down(point: &QVector) -> QVector {
    let coords = point.coords();
    QVector::new(coords[..coords.len().saturating_sub(1)].to_vec())
}

/// Minimum of `f` over `X` without the epigraph: on each region where piece
/// `k` attains the max, `f` is the affine function of that piece.
pub fn minimum_by_pieces(x: &Polyhedron, f: &PiecewiseAffine) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for (k, piece) in f.pieces.iter().enumerate() {
        let region = x.with_inequalities(
            f.pieces
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, other)| Constraint::new(&other.g - &piece.g, &piece.h - &other.h))
                .collect(),
        );
        match lp::solve(&region, &LinearObjective::new(piece.g.clone()))? {
            LpOutcome::Optimal(sol) => {
                let value = sol.value + &piece.h;
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
            LpOutcome::Unbounded => return Err(Error::UnboundedDirection),
            LpOutcome::Infeasible => {}
        }
    }
    Ok(best)
}

/// `M(X, f)` as the sublevel set `{x in X : f(x) <= min f}`.
pub fn minimizer_set(x: &Polyhedron, f: &PiecewiseAffine) -> Result<Polyhedron> {
    let value = minimum_by_pieces(x, f)?.ok_or(Error::EmptyPolyhedron)?;
    Ok(x.with_inequalities(
        f.pieces
            .iter()
            .map(|p| Constraint::new(p.g.clone(), &value - &p.h))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use crate::geometry::rat;

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    fn abs_value() -> PiecewiseAffine {
        PiecewiseAffine::new(vec![
            AffinePiece {
                g: v(&[1]),
                h: int(0),
            },
            AffinePiece {
                g: v(&[-1]),
                h: int(0),
            },
        ])
        .unwrap()
    }

    #[test]
    fn constant_on_square() {
        let sq = Polyhedron::unit_cube(2);
        let f = PiecewiseAffine::linear(v(&[0, 0]));
        let epi = lift(&sq, &f).unwrap();
        assert_eq!(epi.lifted.ineqs().len(), 5);
        let sol = lp::solve(&epi.lifted, &epi.objective)
            .unwrap()
            .into_solution()
            .unwrap();
        assert_eq!(sol.value, int(0));
        assert!(!epi.lifted.is_bounded());
    }

    #[test]
    fn absolute_value_on_interval() {
        let x = Polyhedron::from_rows(1, &[(&[1], 1), (&[-1], 1)], &[]).unwrap();
        let epi = lift(&x, &abs_value()).unwrap();
        let sol = lp::solve(&epi.lifted, &epi.objective)
            .unwrap()
            .into_solution()
            .unwrap();
        assert_eq!(sol.point, v(&[0, 0]));
        assert_eq!(minimum_by_pieces(&x, &abs_value()).unwrap(), Some(int(0)));
    }

    #[test]
    fn linear_objective_on_trapezoid() {
        let x = demo::trapezoid();
        let f = PiecewiseAffine::linear(v(&[-1, 0]));
        let epi = lift(&x, &f).unwrap();
        let face = lp::optimal_face(&epi.lifted, &epi.objective).unwrap();
        let lifted_vertices = face.vertices().unwrap();
        let down: Vec<QVector> = lifted_vertices.iter().map(project_down).collect();
        assert_eq!(down, vec![v(&[3, 0]), v(&[3, 1])]);
        assert!(lifted_vertices.iter().all(|p| p[2] == int(-3)));
        assert_eq!(minimizer_set(&x, &f).unwrap().vertices().unwrap(), down);
    }

    #[test]
    fn direction_lifting() {
        let zero = lift_direction(&Subspace::zero(2));
        assert_eq!(zero.basis(), &[v(&[0, 0, 1])]);
        let e1 = lift_direction(&Subspace::coordinate(2, &[0]));
        assert_eq!(e1.dim(), 2);
        assert!(e1.contains_vector(&v(&[1, 0, 0])) && e1.contains_vector(&v(&[0, 0, 1])));
    }

    #[test]
    fn projection_round_trip() {
        let p = QVector::new(vec![int(3), rat(1, 2), int(-3)]);
        assert_eq!(project_down(&p), QVector::new(vec![int(3), rat(1, 2)]));
        let f = abs_value();
        let x = QVector::new(vec![rat(-2, 3)]);
        let lifted = lift_point(&f, &x);
        assert_eq!(lifted[1], rat(2, 3));
        assert_eq!(project_down(&lifted), x);
    }

    #[test]
    fn rejects_bad_pieces() {
        assert!(PiecewiseAffine::new(Vec::new()).is_err());
        let mixed = vec![
            AffinePiece {
                g: v(&[1]),
                h: int(0),
            },
            AffinePiece {
                g: v(&[1, 2]),
                h: int(0),
            },
        ];
        assert!(PiecewiseAffine::new(mixed).is_err());
        let text = r#"{"pieces": [{"g": ["1", "-1/2"], "h": "3/4"}]}"#;
        let f: PiecewiseAffine = serde_json::from_str(text).unwrap();
        assert_eq!(f.eval(&v(&[1, 1])), rat(5, 4));
    }
}
