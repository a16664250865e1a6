use super::*;
use crate::geometry::{rat, Segment};

fn v(c: &[i64]) -> QVector {
    QVector::from_ints(c)
}

fn q(c: &[(i64, i64)]) -> QVector {
    c.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn square() -> Polyhedron {
    Polyhedron::unit_cube(2)
}

/// conv{(1,0),(3,0),(3,1),(0,4)}: rows x1<=3, x1+x2<=4, 4x1+x2>=4, x2>=0.
fn trapezoid() -> Polyhedron {
    Polyhedron::from_rows(
        2,
        &[(&[1, 0], 3), (&[1, 1], 4), (&[-4, -1], -4), (&[0, -1], 0)],
        &[],
    )
    .unwrap()
}

fn set(items: &[usize]) -> BTreeSet<usize> {
    items.iter().copied().collect()
}

#[test]
fn contains_examples() {
    assert!(square().contains(&q(&[(1, 2), (1, 2)])));
    assert!(!square().contains(&v(&[2, 0])));
    assert!(trapezoid().contains(&v(&[1, 3])));
    assert!(!trapezoid().contains(&v(&[0, 0])));
}

#[test]
fn implicit_equality_examples() {
    let point = Polyhedron::from_rows(1, &[(&[1], 1), (&[-1], -1)], &[]).unwrap();
    assert_eq!(point.implicit_equalities().unwrap(), set(&[0, 1]));
    assert_eq!(square().implicit_equalities().unwrap(), set(&[]));

    let slice = trapezoid().with_equalities(vec![Constraint::new(v(&[1, 0]), int(3))]);
    assert_eq!(slice.implicit_equalities().unwrap(), set(&[0]));

    let empty = Polyhedron::from_rows(1, &[(&[1], 0), (&[-1], -1)], &[]).unwrap();
    assert_eq!(empty.implicit_equalities(), Err(Error::EmptyPolyhedron));
}

#[test]
fn smallest_face_examples() {
    let f = square().smallest_face(&q(&[(1, 2), (1, 2)])).unwrap();
    assert!(f.tight_set.is_empty());
    assert_eq!(f.dim, 2);

    let f = square().smallest_face(&v(&[0, 0])).unwrap();
    assert_eq!(f.tight_set.len(), 2);
    assert_eq!(f.dim, 0);

    let f = trapezoid().smallest_face(&q(&[(3, 1), (1, 2)])).unwrap();
    assert_eq!(f.tight_set, set(&[0]));
    assert_eq!(f.dim, 1);

    assert_eq!(
        trapezoid().smallest_face(&v(&[0, 0])),
        Err(Error::PointNotInPolyhedron)
    );
}

#[test]
fn tight_set_at_a_point_is_canonical() {
    let x = trapezoid();
    for probe in [v(&[3, 0]), q(&[(3, 1), (1, 2)]), v(&[2, 1]), v(&[0, 4])] {
        let f = x.smallest_face(&probe).unwrap();
        let face = x.face_polyhedron(&f.tight_set);
        assert_eq!(face.implicit_equalities().unwrap(), f.tight_set);
        assert_eq!(face.dimension().unwrap(), f.dim);
    }
}

#[test]
fn face_relation_examples() {
    assert_eq!(
        square()
            .face_relation(&q(&[(1, 2), (1, 2)]), &v(&[0, 0]))
            .unwrap(),
        FaceRelation::ProperSubface
    );
    let x = trapezoid();
    let mid = q(&[(3, 1), (1, 2)]);
    assert_eq!(
        x.face_relation(&mid, &q(&[(3, 1), (1, 4)])).unwrap(),
        FaceRelation::EqualFace
    );
    assert_eq!(
        x.face_relation(&mid, &v(&[3, 0])).unwrap(),
        FaceRelation::ProperSubface
    );
    assert_eq!(
        x.face_relation(&v(&[3, 0]), &mid).unwrap(),
        FaceRelation::ProperSuperface
    );
    assert_eq!(
        x.face_relation(&v(&[3, 0]), &v(&[0, 4])).unwrap(),
        FaceRelation::Incomparable
    );
}

#[test]
fn relative_interior_point_examples() {
    let interval = Polyhedron::from_rows(1, &[(&[1], 1), (&[-1], 0)], &[]).unwrap();
    assert_eq!(
        interval
            .relative_interior_point(RiStrategy::VertexBarycenter)
            .unwrap(),
        q(&[(1, 2)])
    );

    let single = Polyhedron::from_rows(2, &[], &[(&[1, 0], 3), (&[0, 1], 1)]).unwrap();
    for s in [RiStrategy::SlackAverage, RiStrategy::VertexBarycenter] {
        assert_eq!(single.relative_interior_point(s).unwrap(), v(&[3, 1]));
    }

    let edge = trapezoid().face_polyhedron(&set(&[0]));
    let bary = edge
        .relative_interior_point(RiStrategy::VertexBarycenter)
        .unwrap();
    assert_eq!(bary, q(&[(3, 1), (1, 2)]));
    let avg = edge
        .relative_interior_point(RiStrategy::SlackAverage)
        .unwrap();
    assert_eq!(avg[0], int(3));
    assert!(avg[1] > int(0) && avg[1] < int(1));
    assert!(edge.ri_membership(&bary) && edge.ri_membership(&avg));

    let empty = Polyhedron::from_rows(1, &[(&[1], 0), (&[-1], -1)], &[]).unwrap();
    assert_eq!(
        empty.relative_interior_point(RiStrategy::SlackAverage),
        Err(Error::EmptyPolyhedron)
    );
    let ray = Polyhedron::from_rows(1, &[(&[-1], 0)], &[]).unwrap();
    assert_eq!(
        ray.relative_interior_point(RiStrategy::VertexBarycenter),
        Err(Error::UnboundedPolyhedron)
    );
    assert!(ray.ri_membership(
        &ray.relative_interior_point(RiStrategy::SlackAverage)
            .unwrap()
    ));
}

#[test]
fn ri_membership_examples() {
    assert!(square().ri_membership(&q(&[(1, 2), (1, 2)])));
    assert!(!square().ri_membership(&q(&[(0, 1), (1, 2)])));
    let p = q(&[(3, 1), (1, 2)]);
    assert!(!trapezoid().ri_membership(&p));
    assert!(trapezoid().face_polyhedron(&set(&[0])).ri_membership(&p));
    assert!(!square().ri_membership(&v(&[5, 5])));
}

#[test]
fn restriction_examples() {
    let seg = square()
        .restrict_to_affine(&q(&[(1, 2), (1, 2)]), &Subspace::coordinate(2, &[0]))
        .unwrap();
    assert_eq!(
        seg.vertices().unwrap(),
        vec![q(&[(0, 1), (1, 2)]), q(&[(1, 1), (1, 2)])]
    );

    let same = trapezoid()
        .restrict_to_affine(&v(&[1, 3]), &Subspace::full(2))
        .unwrap();
    assert_eq!(same, trapezoid());

    let vertical = trapezoid()
        .restrict_to_affine(&v(&[1, 3]), &Subspace::coordinate(2, &[1]))
        .unwrap();
    assert_eq!(vertical.vertices().unwrap(), vec![v(&[1, 0]), v(&[1, 3])]);

    assert_eq!(
        trapezoid().restrict_to_affine(&v(&[5, 5]), &Subspace::full(2)),
        Err(Error::PointNotInPolyhedron)
    );
}

#[test]
fn prolong_examples() {
    let x = v(&[1, 1]);
    assert_eq!(square().prolong(&x, &x).unwrap(), Some(x));

    let interval = Polyhedron::from_rows(1, &[(&[1], 1), (&[-1], 0)], &[]).unwrap();
    let mid = q(&[(1, 2)]);
    let u = interval.prolong(&mid, &v(&[0])).unwrap().unwrap();
    assert!(u[0] > rat(1, 2) && u[0] <= int(1));
    assert!(Segment::new(v(&[0]), u).relative_interior_contains(&mid));

    let x = q(&[(3, 1), (1, 2)]);
    let y = v(&[3, 1]);
    let u = trapezoid().prolong(&x, &y).unwrap().unwrap();
    assert_eq!(u[0], int(3));
    assert!(u[1] < rat(1, 2));
    assert!(Segment::new(y, u).relative_interior_contains(&x));

    // A vertex cannot be prolonged past from an interior point.
    assert_eq!(trapezoid().prolong(&v(&[3, 0]), &v(&[2, 1])).unwrap(), None);
}

#[test]
fn vertex_examples() {
    assert_eq!(
        square().vertices().unwrap(),
        vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]
    );
    assert_eq!(
        trapezoid().vertices().unwrap(),
        vec![v(&[0, 4]), v(&[1, 0]), v(&[3, 0]), v(&[3, 1])]
    );
    assert_eq!(
        Polyhedron::unit_cube(7).vertices(),
        Err(Error::DimensionTooLarge { dim: 7, limit: 6 })
    );
    let ray = Polyhedron::from_rows(1, &[(&[-1], 0)], &[]).unwrap();
    assert_eq!(ray.vertices(), Err(Error::UnboundedPolyhedron));
    assert!(!Polyhedron::universe(2).is_bounded());
}

#[test]
fn hull_reconstructs_trapezoid() {
    let pts = [v(&[1, 0]), v(&[3, 0]), v(&[3, 1]), v(&[0, 4]), v(&[2, 1])];
    let hull = hull_of_points(&pts).unwrap();
    assert_eq!(hull.ineqs().len(), 4);
    assert_eq!(hull.vertices().unwrap(), trapezoid().vertices().unwrap());
    assert!(hull_of_points(&[v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).is_err());
}

#[test]
fn face_lattice_of_square() {
    let faces = face_lattice(&square()).unwrap();
    // 4 vertices, 4 edges, the square itself.
    assert_eq!(faces.len(), 9);
    assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 4);
    assert!(faces.iter().any(|f| f.tight_set.is_empty() && f.dim == 2));
}

#[test]
fn meet_of_faces() {
    let x = trapezoid();
    let right = x.smallest_face(&q(&[(3, 1), (1, 2)])).unwrap();
    let bottom = x.smallest_face(&v(&[2, 0])).unwrap();
    let corner = x.meet(&right, &bottom).unwrap();
    assert_eq!(corner, x.smallest_face(&v(&[3, 0])).unwrap());
    let left = x.smallest_face(&q(&[(1, 2), (2, 1)])).unwrap();
    assert_eq!(x.meet(&right, &left), None);
}

#[test]
fn distance_examples() {
    let seg = trapezoid().face_polyhedron(&set(&[0]));
    assert_eq!(squared_distance(&seg, &v(&[2, 0])).unwrap(), int(1));
    assert_eq!(squared_distance(&seg, &v(&[3, 0])).unwrap(), int(0));
    assert_eq!(squared_distance(&seg, &v(&[1, 3])).unwrap(), int(8));
    let apex = Polyhedron::from_rows(2, &[], &[(&[1, 0], 0), (&[0, 1], 4)]).unwrap();
    assert_eq!(squared_distance(&apex, &v(&[1, 3])).unwrap(), int(2));
    assert_eq!(
        squared_distance(&square(), &q(&[(1, 2), (3, 1)])).unwrap(),
        int(4)
    );
}
