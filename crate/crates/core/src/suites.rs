//! Randomized property suites over seeded instances.
//!
//! Each suite draws instance `k` from [`instance_rng`]`(seed, k)` and checks
//! one family of statements about the engine. A failing instance yields a
//! JSON reproducer holding everything needed to replay it.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::descent::{self, DirectionSet, Picker, Rule, Schedule, StopCriteria, Witness};
use crate::diffusion::{self, DiffusionVariant, Pivot};
use crate::epigraph;
use crate::error::Error;
use crate::geometry::linalg::solve_affine;
use crate::geometry::{QVector, Rational, Subspace};
use crate::io::Instance;
use crate::lp::{self, LinearObjective, LpOutcome};
use crate::polyhedron::{face_lattice, Constraint, FaceDescriptor, FaceRelation, Polyhedron, RiStrategy};
use crate::random::{self, instance_rng, RandomPolytope, RNG_ALGORITHM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    /// Dominating direction families keep (interior) local minima.
    Dominance,
    /// Faces of local minima, global minima, meets of interior-minimum faces.
    Faces,
    /// `ri X ∩ ri Y = ri (X ∩ Y)` when the left side is nonempty, and
    /// `M(X,f) ∩ Y = M(X ∩ Y, f)` when the left side is nonempty.
    Ricap,
    /// RI runs from interior local minima stay on one face; RI runs with
    /// constant objective climb a face chain to an interior local minimum.
    Iterations,
    /// Plain runs from pre-interior points stay in the certifying face.
    Captured,
    /// The pre-interior test agrees with the face-based definition (dim 2).
    Cycle,
    /// Minimizer sets and classifications transfer through the epigraph.
    Epigraph,
    /// Averaging diffusion steps land in the relative interior of the block
    /// minimizer set and never lower the bound.
    Diffusion,
    /// Simplex optima match the minimum over the generating points.
    Lp,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Dominance,
        Suite::Faces,
        Suite::Ricap,
        Suite::Iterations,
        Suite::Captured,
        Suite::Cycle,
        Suite::Epigraph,
        Suite::Diffusion,
        Suite::Lp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dominance => "dominance",
            Suite::Faces => "faces",
            Suite::Ricap => "ricap",
            Suite::Iterations => "iterations",
            Suite::Captured => "captured",
            Suite::Cycle => "cycle",
            Suite::Epigraph => "epigraph",
            Suite::Diffusion => "diffusion",
            Suite::Lp => "lp",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Runs instance `index`, returning how many individual checks passed.
    pub fn check(self, seed: u64, index: u64) -> Result<usize, Failure> {
        let mut rng = instance_rng(seed, index);
        let mut ctx = Ctx {
            base: json!({
                "suite": self.name(),
                "seed": seed,
                "index": index,
                "rng": RNG_ALGORITHM,
            }),
            checks: 0,
        };
        match self {
            Suite::Dominance => dominance(&mut rng, &mut ctx),
            Suite::Faces => faces(&mut rng, &mut ctx),
            Suite::Ricap => ricap(&mut rng, &mut ctx),
            Suite::Iterations => iterations(&mut rng, &mut ctx),
            Suite::Captured => captured(&mut rng, &mut ctx),
            Suite::Cycle => cycle(&mut rng, &mut ctx),
            Suite::Epigraph => epigraph_suite(&mut rng, &mut ctx),
            Suite::Diffusion => diffusion_suite(&mut rng, &mut ctx),
            Suite::Lp => lp_suite(&mut rng, &mut ctx),
        }?;
        Ok(ctx.checks)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub message: String,
    pub reproducer: Value,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub index: u64,
    pub checks: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: &'static str,
    pub seed: u64,
    pub rng: &'static str,
    pub count: u64,
    pub passed: u64,
    pub failed: u64,
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| c.failure.is_some())
    }
}

pub fn run_suite(suite: Suite, seed: u64, count: u64) -> SuiteReport {
    let cases: Vec<CaseOutcome> = (0..count)
        .map(|index| match suite.check(seed, index) {
            Ok(checks) => CaseOutcome {
                index,
                checks,
                failure: None,
            },
            Err(failure) => CaseOutcome {
                index,
                checks: 0,
                failure: Some(failure),
            },
        })
        .collect();
    let failed = cases.iter().filter(|c| c.failure.is_some()).count() as u64;
    SuiteReport {
        schema: 1,
        suite: suite.name(),
        seed,
        rng: RNG_ALGORITHM,
        count,
        passed: count - failed,
        failed,
        cases,
    }
}

/// Per-instance bookkeeping: the reproducer context and a check counter.
struct Ctx {
    base: Value,
    checks: usize,
}

type Outcome = Result<(), Failure>;

impl Ctx {
    fn set(&mut self, key: &str, value: impl Serialize) {
        self.base[key] = serde_json::to_value(value).expect("serializable");
    }

    fn failure(&self, message: String, probe: Option<&QVector>) -> Failure {
        let mut reproducer = self.base.clone();
        if let Some(p) = probe {
            reproducer["probe"] = serde_json::to_value(p).expect("serializable");
            if reproducer.get("instance").is_some() {
                reproducer["instance"]["start"] = reproducer["probe"].clone();
            }
        }
        Failure {
            message,
            reproducer,
        }
    }

    fn ensure(&mut self, ok: bool, probe: Option<&QVector>, message: impl FnOnce() -> String) -> Outcome {
        if ok {
            self.checks += 1;
            Ok(())
        } else {
            Err(self.failure(message(), probe))
        }
    }

    fn lift<T>(&self, r: Result<T, Error>, probe: Option<&QVector>, what: &str) -> Result<T, Failure> {
        r.map_err(|e| self.failure(format!("{what}: {e}"), probe))
    }
}

/// A random polytope, objective and direction family.
struct Desk {
    poly: RandomPolytope,
    c: LinearObjective,
    dirs: DirectionSet,
    sched: Schedule,
    strategy: RiStrategy,
}

impl Desk {
    fn new(rng: &mut ChaCha8Rng, dim: usize) -> Desk {
        let poly = random::random_polytope(rng, dim);
        let c = random::random_objective(rng, dim);
        let dirs = random::random_directions(rng, dim);
        let sched = Schedule::cyclic(dirs.len());
        let strategy = if rng.gen_bool(0.5) {
            RiStrategy::SlackAverage
        } else {
            RiStrategy::VertexBarycenter
        };
        Desk {
            poly,
            c,
            dirs,
            sched,
            strategy,
        }
    }

    fn p(&self) -> &Polyhedron {
        &self.poly.polyhedron
    }

    fn dim(&self) -> usize {
        self.p().ambient_dim()
    }

    fn instance(&self, start: QVector, rule: Rule) -> Instance {
        Instance {
            polyhedron: self.p().clone(),
            objective: self.c.clone(),
            directions: self.dirs.clone(),
            schedule: self.sched.clone(),
            start,
            rule,
            stop: StopCriteria::default(),
        }
    }

    fn ri_rule(&self) -> Rule {
        Rule::Ri {
            strategy: self.strategy,
        }
    }

    fn record(&self, ctx: &mut Ctx) {
        let start = self.poly.points[0].clone();
        ctx.set("instance", self.instance(start, self.ri_rule()));
    }

    fn is_local(&self, ctx: &Ctx, x: &QVector) -> Result<bool, Failure> {
        ctx.lift(descent::is_local_min(self.p(), &self.c, x, &self.dirs), Some(x), "is_local_min")
    }

    fn is_interior(&self, ctx: &Ctx, x: &QVector) -> Result<bool, Failure> {
        ctx.lift(
            descent::is_interior_local_min(self.p(), &self.c, x, &self.dirs),
            Some(x),
            "is_interior_local_min",
        )
    }

    fn run(&self, ctx: &Ctx, x: &QVector, rule: Rule, stop: StopCriteria) -> Result<descent::Trace, Failure> {
        ctx.lift(
            descent::run(self.p(), &self.c, x, &self.dirs, &self.sched, rule, stop),
            Some(x),
            "run",
        )
    }

    /// Points after each single step of `rounds` full rounds from `x`.
    fn walk(&self, ctx: &Ctx, x: &QVector, rule: Rule, rounds: usize) -> Result<Vec<QVector>, Failure> {
        let mut points = Vec::new();
        let mut current = x.clone();
        for _ in 0..rounds {
            for k in self.sched.application_order() {
                current = ctx.lift(
                    descent::step(self.p(), &self.c, &current, self.dirs.get(k), rule),
                    Some(x),
                    "step",
                )?;
                points.push(current.clone());
            }
        }
        Ok(points)
    }

    /// Interior local minimum from an RI run, if one certifies in time and
    /// its coordinates are small enough to probe further.
    fn certified_minimum(&self, ctx: &Ctx, start: &QVector) -> Result<Option<QVector>, Failure> {
        let stop = StopCriteria {
            max_rounds: 12,
            stall_rounds: 0,
        };
        let trace = self.run(ctx, start, self.ri_rule(), stop)?;
        Ok((trace.certified && compact(&trace.final_point)).then_some(trace.final_point))
    }

    /// A relative interior point of `M(X, c)`, which is an interior local
    /// minimum for every direction family.
    fn global_interior_minimum(&self, ctx: &Ctx) -> Result<QVector, Failure> {
        let opt = ctx.lift(lp::optimal_face(self.p(), &self.c), None, "optimal_face")?;
        ctx.lift(opt.relative_interior_point(self.strategy), None, "ri point")
    }

    fn face_of(&self, ctx: &Ctx, x: &QVector) -> Result<FaceDescriptor, Failure> {
        ctx.lift(self.p().smallest_face(x), Some(x), "smallest_face")
    }
}

/// Bit budget for points used as starting probes. RI iterates inside a
/// face keep moving, and their exact coordinates can grow without bound.
const PROBE_BITS: u64 = 256;

fn compact(x: &QVector) -> bool {
    x.iter().all(|q| q.numer().bits() + q.denom().bits() <= PROBE_BITS)
}

fn random_probes(rng: &mut ChaCha8Rng, points: &[QVector], count: usize) -> Vec<QVector> {
    (0..count).map(|_| random::random_point(rng, points)).collect()
}

/// `w ⊆ s` by solving for each basis vector of `w` in the basis of `s`.
fn contained_by_solving(s: &Subspace, w: &Subspace) -> bool {
    let n = s.ambient_dim();
    let columns = s.basis();
    w.basis().iter().all(|target| {
        let rows: Vec<QVector> = (0..n)
            .map(|i| columns.iter().map(|b| b[i].clone()).collect())
            .collect();
        solve_affine(&rows, target.coords(), columns.len()).is_some()
    })
}

fn dominates_by_solving(strong: &DirectionSet, weak: &DirectionSet) -> bool {
    weak.subspaces()
        .iter()
        .all(|w| strong.subspaces().iter().any(|s| contained_by_solving(s, w)))
}

fn dominance(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=4);
    let desk = Desk::new(rng, dim);
    let strong = random::dominating_family(rng, &desk.dirs);
    desk.record(ctx);
    ctx.set("dominating_directions", &strong);

    ctx.ensure(dominates_by_solving(&strong, &desk.dirs), None, || {
        "generated family is not dominating by the solving oracle".into()
    })?;
    ctx.ensure(descent::dominates(&strong, &desk.dirs), None, || {
        "dominates() rejects a dominating family".into()
    })?;
    let other = random::random_directions(rng, dim);
    for (a, b) in [(&other, &desk.dirs), (&desk.dirs, &other), (&desk.dirs, &strong)] {
        ctx.ensure(descent::dominates(a, b) == dominates_by_solving(a, b), None, || {
            "dominates() disagrees with the solving oracle".into()
        })?;
    }

    let strong_desk = Desk {
        poly: desk.poly.clone(),
        c: desk.c.clone(),
        sched: Schedule::cyclic(strong.len()),
        dirs: strong.clone(),
        strategy: desk.strategy,
    };
    let mut probes = ctx.lift(desk.p().vertices(), None, "vertices")?;
    probes.extend(random_probes(rng, &desk.poly.points, 3));
    probes.push(desk.global_interior_minimum(ctx)?);
    let start = random::random_interior_point(rng, &desk.poly.points);
    if let Some(y) = strong_desk.certified_minimum(ctx, &start)? {
        probes.push(y);
    }
    for x in &probes {
        if strong_desk.is_local(ctx, x)? {
            let weak_local = desk.is_local(ctx, x)?;
            ctx.ensure(weak_local, Some(x), || {
                format!("{x} is a local minimum for the dominating family only")
            })?;
        }
        if strong_desk.is_interior(ctx, x)? {
            let weak_interior = desk.is_interior(ctx, x)?;
            ctx.ensure(weak_interior, Some(x), || {
                format!("{x} is an interior local minimum for the dominating family only")
            })?;
        }
    }
    Ok(())
}

/// Faces whose relative interior points are interior local minima.
fn interior_faces(desk: &Desk, ctx: &Ctx, lattice: &[FaceDescriptor]) -> Result<BTreeSet<FaceDescriptor>, Failure> {
    let mut found = BTreeSet::new();
    for face in lattice {
        let poly = desk.p().face_polyhedron(&face.tight_set);
        let y = ctx.lift(poly.relative_interior_point(RiStrategy::SlackAverage), None, "ri point")?;
        if desk.is_interior(ctx, &y)? {
            found.insert(face.clone());
        }
    }
    Ok(found)
}

fn faces(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=4);
    let desk = Desk::new(rng, dim);
    desk.record(ctx);

    // Global minima are local minima; ri points of M(X, c) are interior ones.
    let opt = ctx.lift(lp::optimal_face(desk.p(), &desk.c), None, "optimal_face")?;
    for v in ctx.lift(opt.vertices(), None, "vertices")? {
        let ok = desk.is_local(ctx, &v)?;
        ctx.ensure(ok, Some(&v), || format!("global minimizer {v} is not a local minimum"))?;
    }
    for s in [RiStrategy::SlackAverage, RiStrategy::VertexBarycenter] {
        let y = ctx.lift(opt.relative_interior_point(s), None, "ri point")?;
        let ok = desk.is_interior(ctx, &y)?;
        ctx.ensure(ok, Some(&y), || {
            format!("ri point {y} of the optimal face is not an interior local minimum")
        })?;
    }

    // Every point of the smallest face of a local minimum is a local minimum.
    let mut probes = ctx.lift(desk.p().vertices(), None, "vertices")?;
    probes.extend(random_probes(rng, &desk.poly.points, 4));
    for x in &probes {
        if !desk.is_local(ctx, x)? {
            continue;
        }
        let face = desk.face_of(ctx, x)?;
        let poly = desk.p().face_polyhedron(&face.tight_set);
        let mut members = ctx.lift(poly.vertices(), Some(x), "face vertices")?;
        members.push(ctx.lift(poly.relative_interior_point(desk.strategy), Some(x), "ri point")?);
        for y in &members {
            let ok = desk.is_local(ctx, y)?;
            ctx.ensure(ok, Some(y), || {
                format!("{y} lies in the face of local minimum {x} but is not a local minimum")
            })?;
        }
    }

    // Meets of interior-minimum faces carry interior minima in their ri;
    // exhaustively over the face lattice for dim <= 3.
    if dim <= 3 && desk.p().ineqs().len() <= 12 {
        let lattice = ctx.lift(face_lattice(desk.p()), None, "face_lattice")?;
        let good = interior_faces(&desk, ctx, &lattice)?;
        for (a, b) in good.iter().tuple_combinations() {
            let Some(meet) = desk.p().meet(a, b) else {
                continue;
            };
            ctx.ensure(good.contains(&meet), None, || {
                format!(
                    "meet {:?} of interior-minimum faces {:?} and {:?} is not an interior-minimum face",
                    meet.tight_set, a.tight_set, b.tight_set
                )
            })?;
            let poly = desk.p().face_polyhedron(&meet.tight_set);
            let y = ctx.lift(poly.relative_interior_point(RiStrategy::VertexBarycenter), None, "ri point")?;
            let ok = desk.is_interior(ctx, &y)?;
            ctx.ensure(ok, Some(&y), || {
                format!("barycenter {y} of a meet face is not an interior local minimum")
            })?;
        }
    } else {
        let mut minima = vec![desk.global_interior_minimum(ctx)?];
        for _ in 0..2 {
            let start = random::random_point(rng, &desk.poly.points);
            if let Some(y) = desk.certified_minimum(ctx, &start)? {
                minima.push(y);
            }
        }
        for (x, y) in minima.iter().tuple_combinations() {
            let (fx, fy) = (desk.face_of(ctx, x)?, desk.face_of(ctx, y)?);
            let Some(meet) = desk.p().meet(&fx, &fy) else {
                continue;
            };
            let poly = desk.p().face_polyhedron(&meet.tight_set);
            let z = ctx.lift(poly.relative_interior_point(desk.strategy), None, "ri point")?;
            let ok = desk.is_interior(ctx, &z)?;
            ctx.ensure(ok, Some(&z), || {
                format!("ri point {z} of F({x}) ∩ F({y}) is not an interior local minimum")
            })?;
        }
    }
    Ok(())
}

fn ricap(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=4);
    let xp = random::random_polytope(rng, dim);
    let x = &xp.polyhedron;
    let z = random::random_interior_point(rng, &xp.points);
    let y = match rng.gen_range(0..4) {
        0 => random::random_polytope(rng, dim).polyhedron,
        1 => {
            let k = rng.gen_range(0..dim);
            Polyhedron::universe(dim)
                .restrict_to_affine(&z, &random::random_subspace(rng, dim, k))
                .expect("universe contains z")
        }
        2 => {
            let a = random::random_objective(rng, dim).c;
            let b = a.dot(&z);
            Polyhedron::new(dim, vec![Constraint::new(a, b)], Vec::new()).expect("sized")
        }
        _ => {
            // A face of X, so that the relative interiors are disjoint.
            let v = &xp.points[rng.gen_range(0..xp.points.len())];
            x.face_polyhedron(&x.smallest_face(v).expect("generating point lies in X").tight_set)
        }
    };
    ctx.set("x", x);
    ctx.set("y", &y);
    let both = ctx.lift(x.intersect(&y), None, "intersect")?;
    if both.is_empty() {
        return Ok(());
    }

    // ri X ∩ ri Y ≠ ∅ iff no row that is slack somewhere on X (or on Y)
    // becomes an implicit equality of X ∩ Y.
    let imp_x = ctx.lift(x.implicit_equalities(), None, "implicit")?;
    let imp_y = ctx.lift(y.implicit_equalities(), None, "implicit")?;
    let imp_xy = ctx.lift(both.implicit_equalities(), None, "implicit")?;
    let offset = x.ineqs().len();
    let overlap = (0..offset).all(|i| imp_x.contains(&i) || !imp_xy.contains(&i))
        && (0..y.ineqs().len()).all(|i| imp_y.contains(&i) || !imp_xy.contains(&(offset + i)));

    let mut probes = ctx.lift(both.vertices(), None, "vertices")?;
    for s in [RiStrategy::SlackAverage, RiStrategy::VertexBarycenter] {
        probes.push(ctx.lift(both.relative_interior_point(s), None, "ri point")?);
    }
    let corners = probes.clone();
    probes.extend(random_probes(rng, &corners, 4));
    probes.push(z.clone());
    probes.retain(|p| both.contains(p));

    if overlap {
        for p in &probes {
            let lhs = x.ri_membership(p) && y.ri_membership(p);
            let rhs = both.ri_membership(p);
            ctx.ensure(lhs == rhs, Some(p), || {
                format!("ri X ∩ ri Y and ri(X ∩ Y) disagree at {p} ({lhs} vs {rhs})")
            })?;
        }
    } else {
        // The two relative interiors are disjoint: no probe may be in both.
        for p in &probes {
            ctx.ensure(!(x.ri_membership(p) && y.ri_membership(p)), Some(p), || {
                format!("{p} is in ri X and ri Y although the overlap test failed")
            })?;
        }
    }

    // M(X, f) ∩ Y = M(X ∩ Y, f) whenever the left side is nonempty.
    let c = random::random_objective(rng, dim);
    ctx.set("objective", &c);
    let mx = ctx.lift(lp::optimal_face(x, &c), None, "optimal_face")?;
    let mx_y = ctx.lift(mx.intersect(&y), None, "intersect")?;
    if !mx_y.is_empty() {
        let mxy = ctx.lift(lp::optimal_face(&both, &c), None, "optimal_face")?;
        let lhs = ctx.lift(mx_y.vertices(), None, "vertices")?;
        let rhs = ctx.lift(mxy.vertices(), None, "vertices")?;
        ctx.ensure(lhs == rhs, None, || {
            format!("M(X,f) ∩ Y has vertices {lhs:?} but M(X ∩ Y, f) has {rhs:?}")
        })?;
    }
    Ok(())
}

fn iterations(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=4);
    let desk = Desk::new(rng, dim);
    desk.record(ctx);
    let d = desk.dim();
    let rule = desk.ri_rule();
    let exact_rounds = |n: usize| StopCriteria {
        max_rounds: n,
        stall_rounds: usize::MAX,
    };

    let mut minima = vec![desk.global_interior_minimum(ctx)?];
    let start = random::random_point(rng, &desk.poly.points);
    if let Some(y) = desk.certified_minimum(ctx, &start)? {
        let ok = desk.is_interior(ctx, &y)?;
        ctx.ensure(ok, Some(&y), || {
            format!("certified run from {start} ended at {y}, not an interior local minimum")
        })?;
        minima.push(y);
    }

    // From an interior local minimum the objective never changes and each
    // step stays in the relative interior of the current smallest face.
    for y in &minima {
        let trace = desk.run(ctx, y, rule, exact_rounds(d + 1))?;
        let fy = desk.c.eval(y);
        for rec in &trace.records {
            ctx.ensure(rec.objective_after == fy, Some(y), || {
                format!("objective moved at step {} from interior minimum {y}", rec.step_index)
            })?;
            let rel = ctx.lift(
                desk.p().face_relation(&rec.point_before, &rec.point_after),
                Some(y),
                "face_relation",
            )?;
            ctx.ensure(rel == FaceRelation::EqualFace, Some(y), || {
                format!(
                    "step {} left ri F(X, {}) for {}",
                    rec.step_index, rec.point_before, rec.point_after
                )
            })?;
        }
    }

    // Runs whose objective stays constant for d+1 rounds climb a chain of
    // faces and pass through an interior local minimum.
    let mut starts = Vec::new();
    for y in &minima {
        let face = desk.face_of(ctx, y)?;
        let poly = desk.p().face_polyhedron(&face.tight_set);
        starts.extend(ctx.lift(poly.vertices(), Some(y), "face vertices")?);
    }
    starts.shuffle(rng);
    starts.truncate(4);
    let pre_interior = starts.len();
    starts.extend(random_probes(rng, &desk.poly.points, 2));
    for (k, x) in starts.iter().enumerate() {
        let points = desk.walk(ctx, x, rule, d + 1)?;
        let fx = desk.c.eval(x);
        let constant = points.iter().all(|z| desk.c.eval(z) == fx);
        if k < pre_interior {
            ctx.ensure(constant, Some(x), || {
                format!("objective changed on an RI run from pre-interior point {x}")
            })?;
        }
        if !constant {
            continue;
        }
        let mut hit = desk.is_interior(ctx, x)?;
        let mut before = x;
        for (step, z) in points.iter().enumerate() {
            let rel = ctx.lift(desk.p().face_relation(before, z), Some(x), "face_relation")?;
            ctx.ensure(
                matches!(rel, FaceRelation::EqualFace | FaceRelation::ProperSuperface),
                Some(x),
                || format!("face shrank at step {step} of a constant run from {x}"),
            )?;
            hit = hit || desk.is_interior(ctx, z)?;
            before = z;
        }
        ctx.ensure(hit, Some(x), || {
            format!("constant RI run from {x} met no interior local minimum in d+1 rounds")
        })?;
    }
    Ok(())
}

fn captured(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=4);
    let desk = Desk::new(rng, dim);
    desk.record(ctx);
    let d = desk.dim();

    // (start, certifying interior local minimum)
    let mut cases: Vec<(QVector, QVector)> = Vec::new();
    let mut minima = vec![desk.global_interior_minimum(ctx)?];
    let start = random::random_point(rng, &desk.poly.points);
    if let Some(y) = desk.certified_minimum(ctx, &start)? {
        minima.push(y);
    }
    for y in &minima {
        let face = desk.face_of(ctx, y)?;
        let poly = desk.p().face_polyhedron(&face.tight_set);
        let corners = ctx.lift(poly.vertices(), Some(y), "face vertices")?;
        let inside = random::random_point(rng, &corners);
        for x in corners.into_iter().chain([inside]) {
            cases.push((x, y.clone()));
        }
    }
    // Random points the classifier calls pre-interior, certified by p(x).
    for x in random_probes(rng, &desk.poly.points, 3) {
        let cls = ctx.lift(
            descent::classify(desk.p(), &desk.c, &x, &desk.dirs, &desk.sched, desk.strategy),
            Some(&x),
            "classify",
        )?;
        if let Some(Witness::InteriorLocalMin { point }) = cls.witness {
            let ok = desk.is_interior(ctx, &point)?;
            ctx.ensure(ok, Some(&x), || format!("witness {point} for {x} is not an interior local minimum"))?;
            cases.push((x, point));
        }
    }

    let pickers = [
        Picker::LexMinVertex,
        Picker::LexMaxVertex,
        Picker::Sticky,
        Picker::RiPoint(desk.strategy),
    ];
    cases.shuffle(rng);
    cases.truncate(5);
    for (x, y) in &cases {
        let face = desk.face_of(ctx, y)?;
        let poly = desk.p().face_polyhedron(&face.tight_set);
        ctx.ensure(poly.contains(x), Some(x), || format!("{x} is not in F(X, {y})"))?;
        let fx = desk.c.eval(x);
        for picker in pickers {
            let points = desk.walk(ctx, x, Rule::Plain { picker }, d + 1)?;
            for (step, z) in points.iter().enumerate() {
                ctx.ensure(desk.c.eval(z) == fx && poly.contains(z), Some(x), || {
                    format!("{picker:?} run from {x} escaped F(X, {y}) at step {step}: {z}")
                })?;
            }
        }
    }
    Ok(())
}

fn cycle(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let desk = Desk::new(rng, 2);
    desk.record(ctx);
    let lattice = ctx.lift(face_lattice(desk.p()), None, "face_lattice")?;
    let good = interior_faces(&desk, ctx, &lattice)?;

    let mut probes = ctx.lift(desk.p().vertices(), None, "vertices")?;
    for face in &lattice {
        let poly = desk.p().face_polyhedron(&face.tight_set);
        probes.push(ctx.lift(poly.relative_interior_point(RiStrategy::VertexBarycenter), None, "ri point")?);
    }
    probes.extend(random_probes(rng, &desk.poly.points, 4));

    for x in &probes {
        let tight = desk.p().tight_set(x);
        let definitional = good.iter().any(|g| g.tight_set.is_subset(&tight));
        let decided = ctx.lift(
            descent::is_pre_interior_local_min(desk.p(), &desk.c, x, &desk.dirs, &desk.sched, desk.strategy),
            Some(x),
            "is_pre_interior_local_min",
        )?;
        ctx.ensure(decided == definitional, Some(x), || {
            format!("pre-interior test says {decided} at {x}, face search says {definitional}")
        })?;
        let cls = ctx.lift(
            descent::classify(desk.p(), &desk.c, x, &desk.dirs, &desk.sched, desk.strategy),
            Some(x),
            "classify",
        )?;
        ctx.ensure(
            cls.is_pre_interior_local == definitional
                && (!cls.is_interior_local || cls.is_pre_interior_local)
                && (!cls.is_pre_interior_local || cls.is_local),
            Some(x),
            || format!("inconsistent classification {cls:?} at {x}"),
        )?;
    }
    Ok(())
}

fn epigraph_suite(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(2..=3);
    let xp = random::random_polytope(rng, dim);
    let x = &xp.polyhedron;
    let pieces = rng.gen_range(2..=4);
    let f = random::random_piecewise(rng, dim, pieces);
    let k = rng.gen_range(1..=dim);
    let space = random::random_subspace(rng, dim, k);
    let x0 = random::random_point(rng, &xp.points);
    ctx.set("x", x);
    ctx.set("f", &f);
    ctx.set("direction", &space);
    ctx.set("point", &x0);

    let epi = ctx.lift(epigraph::lift(x, &f), None, "lift")?;
    let pi = &epi.objective;

    // Block minimizer sets, directly and through the lift.
    let restricted = ctx.lift(x.restrict_to_affine(&x0, &space), None, "restrict")?;
    let direct = ctx.lift(epigraph::minimizer_set(&restricted, &f), None, "direct minimizer")?;
    let lifted = ctx.lift(
        descent::minimizer_set(&epi.lifted, pi, &epigraph::lift_point(&f, &x0), &epigraph::lift_direction(&space)),
        None,
        "lifted minimizer",
    )?;
    let mut probes = ctx.lift(restricted.vertices(), None, "vertices")?;
    probes.extend(ctx.lift(direct.vertices(), None, "vertices")?);
    for poly in [&restricted, &direct] {
        for s in [RiStrategy::SlackAverage, RiStrategy::VertexBarycenter] {
            probes.push(ctx.lift(poly.relative_interior_point(s), None, "ri point")?);
        }
    }
    let corners = probes.clone();
    while probes.len() < 20 {
        probes.push(random::random_point(rng, &corners));
    }
    probes.truncate(20);
    for y in &probes {
        let ybar = epigraph::lift_point(&f, y);
        let (a, b) = (direct.contains(y), lifted.contains(&ybar));
        ctx.ensure(a == b, Some(y), || {
            format!("minimizer membership differs at {y}: direct {a}, lifted {b}")
        })?;
        let (a, b) = (direct.ri_membership(y), lifted.ri_membership(&ybar));
        ctx.ensure(a == b, Some(y), || {
            format!("ri membership differs at {y}: direct {a}, lifted {b}")
        })?;
    }

    // M(X, f) × {t*} = M(epi f, π).
    let t_star = ctx.lift(epigraph::minimum_by_pieces(x, &f), None, "minimum")?;
    let t_star = t_star.expect("X is nonempty");
    let m_direct = ctx.lift(epigraph::minimizer_set(x, &f), None, "direct minimizer")?;
    let lhs: Vec<QVector> = ctx
        .lift(m_direct.vertices(), None, "vertices")?
        .into_iter()
        .map(|v| v.extended(t_star.clone()))
        .collect();
    let m_lifted = ctx.lift(lp::optimal_face(&epi.lifted, pi), None, "optimal_face")?;
    let rhs = ctx.lift(m_lifted.vertices(), None, "vertices")?;
    ctx.ensure(lhs == rhs, None, || {
        format!("M(X,f) x {{t*}} has vertices {lhs:?}, M(epi f, π) has {rhs:?}")
    })?;

    // Local and interior local minima transfer through the lift.
    let dirs = random::random_directions(rng, dim);
    let lifted_dirs = DirectionSet::new(dirs.subspaces().iter().map(epigraph::lift_direction).collect())
        .expect("same ambient dimension");
    let mut points = ctx.lift(x.vertices(), None, "vertices")?;
    points.extend(m_direct.vertices().unwrap_or_default());
    points.extend(random_probes(rng, &xp.points, 3));
    for p in &points {
        let mut local = true;
        let mut interior = true;
        for s in dirs.subspaces() {
            let r = ctx.lift(x.restrict_to_affine(p, s), Some(p), "restrict")?;
            let m = ctx.lift(epigraph::minimizer_set(&r, &f), Some(p), "direct minimizer")?;
            local &= m.contains(p);
            interior &= m.ri_membership(p);
        }
        let pbar = epigraph::lift_point(&f, p);
        let l_local = ctx.lift(descent::is_local_min(&epi.lifted, pi, &pbar, &lifted_dirs), Some(p), "is_local_min")?;
        let l_interior = ctx.lift(
            descent::is_interior_local_min(&epi.lifted, pi, &pbar, &lifted_dirs),
            Some(p),
            "is_interior_local_min",
        )?;
        ctx.ensure(local == l_local && interior == l_interior, Some(p), || {
            format!("classification at {p}: direct ({local}, {interior}), lifted ({l_local}, {l_interior})")
        })?;
    }
    Ok(())
}

/// Best bound reachable by changing only the pivot block:
/// `min_i (θφ_u(i) + min_j θφ_e(i,j))` replaces the two terms it touches.
fn block_optimum(m: &diffusion::PairwiseModel, phi: &diffusion::Reparametrization, pivot: Pivot) -> Result<Rational, Error> {
    let bound = diffusion::dual_bound(m, phi)?;
    let mut best: Option<Rational> = None;
    for i in 0..m.labels()[pivot.node] {
        let v = m.node_cost(phi, pivot.node, i) + m.min_marginal(phi, pivot, i)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(bound - m.node_min(phi, pivot.node) - m.edge_min(phi, pivot.edge) + best.expect("labels are positive"))
}

fn diffusion_suite(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let model = random::random_model(rng);
    ctx.set("model", &model);
    let primal = model.brute_force_minimum();
    let mut phi = model.zero_shift();
    let mut bound = ctx.lift(diffusion::dual_bound(&model, &phi), None, "dual_bound")?;
    for _sweep in 0..5 {
        for pivot in model.pivots() {
            ctx.set("phi", &phi);
            ctx.set("pivot", pivot);
            let next = ctx.lift(
                diffusion::diffusion_step(&model, &phi, pivot, DiffusionVariant::Averaging),
                None,
                "diffusion_step",
            )?;
            for i in 0..model.labels()[pivot.node] {
                let node = model.node_cost(&next, pivot.node, i);
                let marginal = ctx.lift(model.min_marginal(&next, pivot, i), None, "min_marginal")?;
                ctx.ensure(node == marginal, None, || {
                    format!("label {i} not equalized: node {node}, marginal {marginal}")
                })?;
            }
            let next_bound = ctx.lift(diffusion::dual_bound(&model, &next), None, "dual_bound")?;
            ctx.ensure(next_bound >= bound && next_bound <= primal, None, || {
                format!("bound went from {bound} to {next_bound} (primal {primal})")
            })?;
            let best = ctx.lift(block_optimum(&model, &phi, pivot), None, "block optimum")?;
            ctx.ensure(best == next_bound, None, || {
                format!("step reached {next_bound}, block optimum is {best}")
            })?;
            let block = ctx.lift(diffusion::encode_dual_block(&model, &phi, pivot), None, "encode")?;
            let ms = ctx.lift(block.minimizer_set(), None, "minimizer_set")?;
            let image = ctx.lift(diffusion::encode_point(&model, &next), None, "encode_point")?;
            ctx.ensure(ms.contains(&image), None, || "step leaves the block minimizer set".into())?;
            let t = &image[image.dim() - 1];
            ctx.ensure(*t == -&best, None, || format!("lifted optimum {t} vs block optimum {best}"))?;
            let ri = ctx.lift(
                diffusion::verify_ri_property(&model, &phi, pivot, DiffusionVariant::Averaging),
                None,
                "verify_ri_property",
            )?;
            ctx.ensure(ri, None, || "averaging step is not in the relative interior".into())?;
            phi = next;
            bound = next_bound;
        }
    }
    Ok(())
}

fn lp_suite(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Outcome {
    let dim = rng.gen_range(1..=4);
    let poly = random::random_polytope(rng, dim);
    let c = random::random_objective(rng, dim);
    ctx.set("polyhedron", &poly.polyhedron);
    ctx.set("objective", &c);
    let outcome = ctx.lift(lp::solve(&poly.polyhedron, &c), None, "solve")?;
    let LpOutcome::Optimal(sol) = outcome else {
        return Err(ctx.failure(format!("bounded polytope reported {:?}", outcome.status()), None));
    };
    let by_points = poly.points.iter().map(|p| c.eval(p)).min().expect("nonempty");
    ctx.ensure(sol.value == by_points, None, || {
        format!("simplex value {} but generating points give {by_points}", sol.value)
    })?;
    let enumerated = ctx.lift(poly.polyhedron.vertices_by_enumeration(), None, "vertex enumeration")?;
    let walked = ctx.lift(poly.polyhedron.vertices(), None, "vertices")?;
    ctx.ensure(walked == enumerated, None, || {
        format!("edge walk found {walked:?}, enumeration found {enumerated:?}")
    })?;
    let by_vertices = enumerated.iter().map(|v| c.eval(v)).min().expect("nonempty");
    ctx.ensure(sol.value == by_vertices, None, || {
        format!("simplex value {} but vertex enumeration gives {by_vertices}", sol.value)
    })?;
    ctx.ensure(lp::verify_certificate(&poly.polyhedron, &c, &sol), None, || {
        "dual certificate does not verify".into()
    })?;
    Ok(())
}
