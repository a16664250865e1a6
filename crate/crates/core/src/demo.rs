//! A small two-dimensional instance where plain and RI block steps behave
//! differently.
//!
//! `X = conv{(1,0), (3,0), (3,1), (0,4)}`, objective `-x1`, directions the
//! two coordinate axes. Its local minima are `[(3,0),(3,1)] ∪ [(0,4),(3,1)]`,
//! the interior local minima are `{(0,4)} ∪ ri [(3,0),(3,1)]` and the
//! pre-interior ones `{(0,4)} ∪ [(3,0),(3,1)]`.

use crate::descent::{DirectionSet, Rule, Schedule, StopCriteria};
use crate::geometry::QVector;
use crate::io::Instance;
use crate::lp::LinearObjective;
use crate::polyhedron::{Polyhedron, RiStrategy};

/// Rows, in order: `x1 <= 3`, `x1 + x2 <= 4`, `4 x1 + x2 >= 4`, `x2 >= 0`.
pub fn trapezoid() -> Polyhedron {
    Polyhedron::from_rows(
        2,
        &[(&[1, 0], 3), (&[1, 1], 4), (&[-4, -1], -4), (&[0, -1], 0)],
        &[],
    )
    .expect("fixed rows")
}

pub fn objective() -> LinearObjective {
    LinearObjective::new(QVector::from_ints(&[-1, 0]))
}

pub fn directions() -> DirectionSet {
    DirectionSet::coordinate_axes(2)
}

/// RI rule with vertex barycenters, 50 rounds.
pub fn worked_example(start: QVector) -> Instance {
    Instance {
        polyhedron: trapezoid(),
        objective: objective(),
        directions: directions(),
        schedule: Schedule::cyclic(2),
        start,
        rule: Rule::Ri {
            strategy: RiStrategy::VertexBarycenter,
        },
        stop: StopCriteria {
            max_rounds: 50,
            stall_rounds: 0,
        },
    }
}

/// The pre-interior local minima as polyhedra: the vertex `(0,4)` and the
/// edge `x1 = 3`.
pub fn pre_interior_targets() -> Vec<Polyhedron> {
    let x = trapezoid();
    vec![
        Polyhedron::from_rows(2, &[], &[(&[1, 0], 0), (&[0, 1], 4)]).expect("fixed rows"),
        x.face_polyhedron(&[0].into_iter().collect()),
    ]
}
