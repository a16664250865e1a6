use std::collections::BTreeSet;

use bcm_core::diffusion::{self, DiffusionVariant};
use bcm_core::geometry::linalg::rank;
use bcm_core::geometry::{
    in_relative_interior_of_segment, int, rat, xyzu_witness, QVector, Rational, Segment, Subspace,
};
use bcm_core::io::{parse_instance, parse_polyhedron};
use bcm_core::lp::{self, LpOutcome};
use bcm_core::polyhedron::{FaceRelation, Polyhedron, RiStrategy};
use bcm_core::random::{self, instance_rng};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn vector(dim: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(small_rational(), dim).prop_map(QVector::new)
}

/// Rank by plain Gaussian elimination over the rationals, eliminating the
/// columns from last to first.
fn rank_oracle(rows: &[QVector]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in (0..ncols).rev() {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let factor = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &factor * y;
            }
        }
        r += 1;
    }
    r
}

/// A bounded polytope, possibly restricted to a face or an affine slice
/// through one of its interior points.
fn polytope_family(seed: u64) -> Polyhedron {
    use rand::Rng;
    let mut rng = instance_rng(seed, 0);
    let dim = rng.gen_range(1..=4);
    let p = random::random_polytope(&mut rng, dim);
    match rng.gen_range(0..3) {
        0 => p.polyhedron,
        1 => {
            let v = &p.points[rng.gen_range(0..p.points.len())];
            let mid = random::random_point(&mut rng, &[v.clone(), p.points[0].clone()]);
            let face = p.polyhedron.smallest_face(&mid).unwrap();
            p.polyhedron.face_polyhedron(&face.tight_set)
        }
        _ => {
            let z = random::random_interior_point(&mut rng, &p.points);
            let k = rng.gen_range(0..dim);
            let space = random::random_subspace(&mut rng, dim, k);
            p.polyhedron.restrict_to_affine(&z, &space).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_agrees_with_reversed_elimination(rows in prop::collection::vec(vector(6), 4)) {
        prop_assert_eq!(rank(&rows), rank_oracle(&rows));
    }

    #[test]
    fn complement_is_orthogonal_and_an_involution(vs in prop::collection::vec(vector(4), 0..4)) {
        let space = Subspace::span(&vs, 4).unwrap();
        let comp = space.orthogonal_complement();
        prop_assert_eq!(space.dim() + comp.dim(), 4);
        for a in space.basis() {
            for b in comp.basis() {
                prop_assert!(a.dot(b).is_zero());
            }
        }
        prop_assert!(comp.orthogonal_complement().same_span(&space));
    }

    #[test]
    fn segment_relative_interior_partitions(a in vector(3), b in vector(3), t in 0i64..=8) {
        prop_assume!(a != b);
        let s = Segment::new(a.clone(), b.clone());
        let x = a.lerp(&b, &rat(t, 8));
        let inside = in_relative_interior_of_segment(&x, &s);
        prop_assert!(s.contains(&x));
        prop_assert_eq!(inside, x != a && x != b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn witness_lies_in_both_relative_interiors(
        y in vector(3),
        z in vector(3),
        u in vector(3),
        (n, d) in (1i64..=9).prop_flat_map(|d| (1..d + 1, Just(d + 1))),
    ) {
        let alpha = rat(n, d);
        let x = u.lerp(&y, &alpha);
        let v = xyzu_witness(&y, &z, &u, &x, &alpha).unwrap();
        prop_assert!(in_relative_interior_of_segment(&v, &Segment::new(u.clone(), z.clone())));
        let far = &(&x + &z) - &y;
        prop_assert!(in_relative_interior_of_segment(&v, &Segment::new(x.clone(), far)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn relative_interior_points_are_relative_interior(seed in any::<u64>()) {
        let p = polytope_family(seed);
        for s in [RiStrategy::SlackAverage, RiStrategy::VertexBarycenter] {
            let x = p.relative_interior_point(s).unwrap();
            prop_assert!(p.ri_membership(&x), "{:?} gave {}", s, x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_walk_matches_enumeration(seed in any::<u64>()) {
        let p = polytope_family(seed);
        let walked = p.vertices().unwrap();
        prop_assert_eq!(&walked, &p.vertices_by_enumeration().unwrap());
        for v in &walked {
            prop_assert!(p.contains(v));
            prop_assert_eq!(p.smallest_face(v).unwrap().dim, 0);
        }
    }

    #[test]
    fn simplex_matches_vertex_minimum(seed in any::<u64>()) {
        let p = polytope_family(seed);
        let mut rng = instance_rng(seed, 1);
        let c = random::random_objective(&mut rng, p.ambient_dim());
        let LpOutcome::Optimal(sol) = lp::solve(&p, &c).unwrap() else {
            return Err(TestCaseError::fail("bounded nonempty polytope"));
        };
        let best = p.vertices_by_enumeration().unwrap().iter().map(|v| c.eval(v)).min().unwrap();
        prop_assert_eq!(&sol.value, &best);
        prop_assert!(lp::verify_certificate(&p, &c, &sol));
        let face = lp::optimal_face(&p, &c).unwrap();
        for v in p.vertices().unwrap() {
            prop_assert_eq!(face.contains(&v), c.eval(&v) == best);
        }
    }

    #[test]
    fn equal_face_is_relative_interior_of_the_face(seed in any::<u64>()) {
        let p = polytope_family(seed);
        let vertices = p.vertices().unwrap();
        let mut probes = vertices.clone();
        for (a, b) in vertices.iter().zip(vertices.iter().skip(1)) {
            probes.push(a.lerp(b, &rat(1, 2)));
        }
        probes.push(p.relative_interior_point(RiStrategy::VertexBarycenter).unwrap());
        for x in &probes {
            let face = p.face_polyhedron(&p.smallest_face(x).unwrap().tight_set);
            for y in &probes {
                let equal = p.face_relation(x, y).unwrap() == FaceRelation::EqualFace;
                prop_assert_eq!(equal, face.ri_membership(y));
            }
        }
    }

    #[test]
    fn nested_polyhedra_sit_in_the_face(seed in any::<u64>()) {
        // Y is a face of X or X cut by an affine subspace; x is in ri Y.
        use rand::Rng;
        let mut rng = instance_rng(seed, 2);
        let dim = rng.gen_range(2..=4);
        let xp = random::random_polytope(&mut rng, dim);
        let x_poly = &xp.polyhedron;
        let z = random::random_point(&mut rng, &xp.points);
        let y_poly = if rng.gen_bool(0.5) {
            x_poly.face_polyhedron(&x_poly.smallest_face(&z).unwrap().tight_set)
        } else {
            let k = rng.gen_range(0..dim);
            x_poly.restrict_to_affine(&z, &random::random_subspace(&mut rng, dim, k)).unwrap()
        };
        let x = y_poly.relative_interior_point(RiStrategy::SlackAverage).unwrap();
        let face = x_poly.face_polyhedron(&x_poly.smallest_face(&x).unwrap().tight_set);
        let mut probes = y_poly.vertices().unwrap();
        let corners = probes.clone();
        probes.push(random::random_interior_point(&mut rng, &corners));
        probes.push(random::random_point(&mut rng, &corners));
        for y in &probes {
            prop_assert!(face.contains(y));
            prop_assert_eq!(y_poly.ri_membership(y), face.ri_membership(y));
        }
    }

    #[test]
    fn hull_contains_its_points(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = instance_rng(seed, 3);
        let dim = rng.gen_range(1..=4);
        let p = random::random_polytope(&mut rng, dim);
        let points: BTreeSet<QVector> = p.points.iter().cloned().collect();
        for v in p.polyhedron.vertices().unwrap() {
            prop_assert!(points.contains(&v));
        }
        prop_assert!(p.points.iter().all(|x| p.polyhedron.contains(x)));
    }

    #[test]
    fn diffusion_bound_is_monotone_and_weakly_dual(seed in any::<u64>()) {
        let mut rng = instance_rng(seed, 4);
        let m = random::random_model(&mut rng);
        let primal = m.brute_force_minimum();
        let mut phi = m.zero_shift();
        let mut bound = diffusion::dual_bound(&m, &phi).unwrap();
        for pivot in m.pivots() {
            phi = diffusion::diffusion_step(&m, &phi, pivot, DiffusionVariant::Averaging).unwrap();
            let next = diffusion::dual_bound(&m, &phi).unwrap();
            prop_assert!(next >= bound && next <= primal);
            bound = next;
        }
    }

    #[test]
    fn instances_round_trip_through_json(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = instance_rng(seed, 5);
        let dim = rng.gen_range(1..=3);
        let p = random::random_polytope(&mut rng, dim);
        let text = serde_json::to_string(&p.polyhedron).unwrap();
        prop_assert_eq!(parse_polyhedron(&text).unwrap(), p.polyhedron.clone());
        let mut inst = bcm_core::demo::worked_example(QVector::from_ints(&[0, 4]));
        inst.polyhedron = p.polyhedron;
        inst.objective = random::random_objective(&mut rng, dim);
        inst.directions = random::random_directions(&mut rng, dim);
        inst.schedule = bcm_core::Schedule::cyclic(inst.directions.len());
        inst.start = p.points[0].clone();
        let back = parse_instance(&inst.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), inst.to_json());
    }
}

#[test]
fn one_sided_diffusion_can_leave_the_relative_interior() {
    let found = (0..200).any(|k| {
        let m = random::random_model(&mut instance_rng(99, k));
        let phi = m.zero_shift();
        m.pivots().into_iter().any(|pivot| {
            !diffusion::verify_ri_property(&m, &phi, pivot, DiffusionVariant::OneSided).unwrap()
        })
    });
    assert!(found, "no one-sided counterexample in 200 models");
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&[QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])]), 2);
    assert_eq!(rank(&[QVector::from_ints(&[2, 4]), QVector::from_ints(&[1, 2])]), 1);
    assert_eq!(rank_oracle(&[QVector::new(vec![int(2), int(4)])]), 1);
}
