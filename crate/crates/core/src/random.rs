//! Seeded generators for small random instances.
//!
//! Every instance is drawn from its own ChaCha8 stream: the suite seed picks
//! the key and the instance index picks the stream, so instance `k` of a
//! suite does not depend on how many instances came before it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::descent::DirectionSet;
use crate::diffusion::{PairwiseEdge, PairwiseModel, MAX_SHIFT_COORDS};
use crate::epigraph::{AffinePiece, PiecewiseAffine};
use crate::geometry::{int, rat, QVector, Rational, Subspace};
use crate::lp::LinearObjective;
use crate::polyhedron::{hull_of_points, Polyhedron};

/// Identifier written into reports next to the seed.
pub const RNG_ALGORITHM: &str = "chacha8";

pub const MAX_POLYTOPE_VERTICES: usize = 12;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn small_int<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

fn small_vector<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> QVector {
    (0..dim).map(|_| small_int(rng, bound)).collect()
}

/// A full-dimensional polytope together with the points it was built from.
#[derive(Clone, Debug)]
pub struct RandomPolytope {
    pub polyhedron: Polyhedron,
    /// Generating points; every vertex is among them.
    pub points: Vec<QVector>,
}

/// Hull of `dim + 1 ..= 12` random integer points in `[-4, 4]^dim`.
pub fn random_polytope<R: Rng>(rng: &mut R, dim: usize) -> RandomPolytope {
    loop {
        let count = rng.gen_range(dim + 1..=MAX_POLYTOPE_VERTICES);
        let points: Vec<QVector> = (0..count).map(|_| small_vector(rng, dim, 4)).collect();
        if let Ok(polyhedron) = hull_of_points(&points) {
            return RandomPolytope { polyhedron, points };
        }
    }
}

/// Integer objective in `[-3, 3]^dim`; zero coordinates are common, which
/// produces non-singleton minimizer sets.
pub fn random_objective<R: Rng>(rng: &mut R, dim: usize) -> LinearObjective {
    LinearObjective::new(
        (0..dim)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    int(0)
                } else {
                    small_int(rng, 3)
                }
            })
            .collect(),
    )
}

/// Span of `k` random small integer vectors (possibly of lower dimension).
pub fn random_subspace<R: Rng>(rng: &mut R, dim: usize, k: usize) -> Subspace {
    let vectors: Vec<QVector> = (0..k).map(|_| small_vector(rng, dim, 2)).collect();
    Subspace::span(&vectors, dim).expect("vectors sized to dim")
}

/// Coordinate axes, a random coordinate partition, or a few random
/// subspaces.
pub fn random_directions<R: Rng>(rng: &mut R, dim: usize) -> DirectionSet {
    match rng.gen_range(0..3) {
        0 => DirectionSet::coordinate_axes(dim),
        1 => {
            let mut axes: Vec<usize> = (0..dim).collect();
            axes.shuffle(rng);
            let mut blocks = Vec::new();
            let mut rest = axes.as_slice();
            while !rest.is_empty() {
                let take = rng.gen_range(1..=rest.len().min(dim - 1).max(1));
                blocks.push(rest[..take].to_vec());
                rest = &rest[take..];
            }
            DirectionSet::coordinate_blocks(dim, &blocks).expect("axes in range")
        }
        _ => {
            let count = rng.gen_range(1..=3);
            DirectionSet::new(
                (0..count)
                    .map(|_| {
                        let k = rng.gen_range(1..dim.max(2));
                        random_subspace(rng, dim, k)
                    })
                    .collect(),
            )
            .expect("same ambient dimension")
        }
    }
}

/// A family dominating `weaker`: each subspace enlarged by a random one,
/// sometimes replaced by the whole space.
pub fn dominating_family<R: Rng>(rng: &mut R, weaker: &DirectionSet) -> DirectionSet {
    let dim = weaker.ambient_dim();
    if rng.gen_bool(0.15) {
        return DirectionSet::new(vec![Subspace::full(dim)]).expect("nonempty");
    }
    let mut family: Vec<Subspace> = weaker
        .subspaces()
        .iter()
        .map(|s| {
            let k = rng.gen_range(0..dim);
            s.sum(&random_subspace(rng, dim, k))
        })
        .collect();
    if family.len() > 1 && rng.gen_bool(0.3) {
        let merged = family[0].sum(&family[1]);
        family.splice(0..2, [merged]);
    }
    DirectionSet::new(family).expect("same ambient dimension")
}

/// A point of the hull of `points`: one of them, a midpoint, or a random
/// convex combination.
pub fn random_point<R: Rng>(rng: &mut R, points: &[QVector]) -> QVector {
    match rng.gen_range(0..3) {
        0 => points.choose(rng).expect("nonempty").clone(),
        1 => {
            let a = points.choose(rng).expect("nonempty");
            let b = points.choose(rng).expect("nonempty");
            a.lerp(b, &rat(1, 2))
        }
        _ => {
            let weights: Vec<i64> = points.iter().map(|_| rng.gen_range(0..=3)).collect();
            let total: i64 = weights.iter().sum();
            if total == 0 {
                return points[0].clone();
            }
            let mut acc = QVector::zeros(points[0].dim());
            for (p, &w) in points.iter().zip(&weights) {
                if w > 0 {
                    acc = &acc + &p.scale(&rat(w, total));
                }
            }
            acc
        }
    }
}

/// Convex combination with strictly positive weights, so it lies in the
/// relative interior of the hull of `points`.
pub fn random_interior_point<R: Rng>(rng: &mut R, points: &[QVector]) -> QVector {
    let weights: Vec<i64> = points.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    points
        .iter()
        .zip(&weights)
        .fold(QVector::zeros(points[0].dim()), |acc, (p, &w)| {
            &acc + &p.scale(&rat(w, total))
        })
}

pub fn random_piecewise<R: Rng>(rng: &mut R, dim: usize, pieces: usize) -> PiecewiseAffine {
    PiecewiseAffine::new(
        (0..pieces)
            .map(|_| AffinePiece {
                g: small_vector(rng, dim, 3),
                h: small_int(rng, 4),
            })
            .collect(),
    )
    .expect("nonempty, equal dimensions")
}

/// 2 to 4 nodes with 2 or 3 labels, a random nonempty edge set within the
/// shift-coordinate budget, integer costs in `[-3, 3]`.
pub fn random_model<R: Rng>(rng: &mut R) -> PairwiseModel {
    let nodes = rng.gen_range(2..=4);
    let labels: Vec<usize> = (0..nodes).map(|_| rng.gen_range(2..=3)).collect();
    let unary = labels.iter().map(|&k| small_vector(rng, k, 3)).collect();
    let mut pairs: Vec<[usize; 2]> = (0..nodes)
        .flat_map(|u| (u + 1..nodes).map(move |v| [u, v]))
        .collect();
    pairs.shuffle(rng);
    let keep = rng.gen_range(1..=pairs.len());
    let mut edges = Vec::new();
    let mut budget = 0;
    for uv in pairs.into_iter().take(keep) {
        let size = labels[uv[0]] + labels[uv[1]];
        if budget + size > MAX_SHIFT_COORDS {
            continue;
        }
        budget += size;
        let uv = if rng.gen_bool(0.5) { uv } else { [uv[1], uv[0]] };
        let costs = (0..labels[uv[0]])
            .map(|_| small_vector(rng, labels[uv[1]], 3))
            .collect();
        edges.push(PairwiseEdge { uv, costs });
    }
    PairwiseModel::new(nodes, labels, unary, edges).expect("consistent by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_of_order() {
        let a: u64 = instance_rng(7, 3).gen();
        let _ = instance_rng(7, 2).gen::<u64>();
        let b: u64 = instance_rng(7, 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, instance_rng(7, 4).gen::<u64>());
    }

    #[test]
    fn polytopes_are_bounded_and_full_dimensional() {
        let mut rng = instance_rng(1, 0);
        for dim in 2..=4 {
            let p = random_polytope(&mut rng, dim);
            assert!(p.polyhedron.is_bounded());
            assert_eq!(p.polyhedron.dimension().unwrap(), dim);
            assert!(p.points.iter().all(|x| p.polyhedron.contains(x)));
            let x = random_interior_point(&mut rng, &p.points);
            assert!(p.polyhedron.ri_membership(&x));
        }
    }

    #[test]
    fn models_respect_the_guard() {
        let mut rng = instance_rng(5, 0);
        for _ in 0..20 {
            let m = random_model(&mut rng);
            assert!(m.shift_dim() <= MAX_SHIFT_COORDS && !m.edges().is_empty());
        }
    }
}
