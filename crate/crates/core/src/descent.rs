//! Block-coordinate minimization of a linear objective over a polyhedron.
//!
//! Each step restricts the polyhedron to `x + I` for one subspace `I` of the
//! direction family, minimizes there, and picks the next point from the
//! minimizer set. The plain rule may pick any minimizer; the RI rule picks
//! from the relative interior of the minimizer set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{serde_rational, QVector, Rational, Subspace};
use crate::lp::{self, LinearObjective, LpOutcome};
use crate::polyhedron::{squared_distance, Constraint, Polyhedron, RiStrategy};

/// The family of subspaces searched by the block steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DirectionSet(Vec<Subspace>);

impl DirectionSet {
    pub fn new(directions: Vec<Subspace>) -> Result<Self> {
        let Some(first) = directions.first() else {
            return Err(Error::InvalidDirections("direction set is empty".into()));
        };
        let n = first.ambient_dim();
        if let Some(s) = directions.iter().find(|s| s.ambient_dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.ambient_dim(),
            });
        }
        Ok(DirectionSet(directions))
    }

    /// `{span e_k}` for every coordinate `k`.
    pub fn coordinate_axes(n: usize) -> Self {
        DirectionSet((0..n).map(|k| Subspace::coordinate(n, &[k])).collect())
    }

    /// One subspace per block of coordinate indices.
    pub fn coordinate_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if let Some(&k) = blocks.iter().flatten().find(|&&k| k >= n) {
            return Err(Error::InvalidDirections(format!(
                "axis {k} out of range for dimension {n}"
            )));
        }
        Self::new(blocks.iter().map(|b| Subspace::coordinate(n, b)).collect())
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0[0].ambient_dim()
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.0[i]
    }
}

/// Order in which directions are visited during one round, written as the
/// sequence `σ(1), ..., σ(m)`. A round applies `σ(m)` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Schedule(Vec<usize>);

impl Schedule {
    pub fn new(order: Vec<usize>, num_directions: usize) -> Result<Self> {
        if let Some(&i) = order.iter().find(|&&i| i >= num_directions) {
            return Err(Error::InvalidSchedule(format!(
                "index {i} out of range for {num_directions} directions"
            )));
        }
        if let Some(missing) = (0..num_directions).find(|i| !order.contains(i)) {
            return Err(Error::InvalidSchedule(format!(
                "direction {missing} never scheduled"
            )));
        }
        Ok(Schedule(order))
    }

    /// `σ = (0, 1, ..., n-1)`.
    pub fn cyclic(num_directions: usize) -> Self {
        Schedule((0..num_directions).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// Direction indices in the order they are applied.
    pub fn application_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().rev().copied()
    }
}

/// How the plain rule chooses among minimizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picker {
    /// Lexicographically smallest point of the minimizer set.
    LexMinVertex,
    /// Lexicographically largest point of the minimizer set.
    LexMaxVertex,
    /// Keep the current point when it is already a minimizer, otherwise
    /// fall back to `LexMinVertex`.
    Sticky,
    /// Same choice as the RI rule.
    RiPoint(RiStrategy),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    Plain { picker: Picker },
    Ri { strategy: RiStrategy },
}

impl Rule {
    /// Strategy used for the RI-rule classifier after a run.
    pub fn classification_strategy(&self) -> RiStrategy {
        match *self {
            Rule::Ri { strategy }
            | Rule::Plain {
                picker: Picker::RiPoint(strategy),
            } => strategy,
            Rule::Plain { .. } => RiStrategy::default(),
        }
    }
}

fn check_instance(p: &Polyhedron, c: &LinearObjective, x: &QVector) -> Result<()> {
    for found in [c.dim(), x.dim()] {
        if found != p.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: p.ambient_dim(),
                found,
            });
        }
    }
    if !p.contains(x) {
        return Err(Error::PointNotInPolyhedron);
    }
    Ok(())
}

fn check_directions(p: &Polyhedron, dirs: &DirectionSet) -> Result<()> {
    if dirs.ambient_dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: dirs.ambient_dim(),
        });
    }
    Ok(())
}

/// Optimal value of `c` over `P ∩ (x + I)`.
fn block_value(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    space: &Subspace,
) -> Result<Rational> {
    let restricted = p.restrict_to_affine(x, space)?;
    match lp::solve(&restricted, c)? {
        LpOutcome::Optimal(sol) => Ok(sol.value),
        LpOutcome::Unbounded => Err(Error::UnboundedDirection),
        LpOutcome::Infeasible => Err(Error::PointNotInPolyhedron),
    }
}

/// `M(P ∩ (x + I), c)`.
pub fn minimizer_set(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    space: &Subspace,
) -> Result<Polyhedron> {
    check_instance(p, c, x)?;
    let value = block_value(p, c, x, space)?;
    let restricted = p.restrict_to_affine(x, space)?;
    Ok(restricted.with_equalities(vec![Constraint::new(c.c.clone(), value)]))
}

/// Lexicographic extreme point by successive coordinate LPs.
fn lex_extreme(set: &Polyhedron, maximize: bool) -> Result<QVector> {
    let n = set.ambient_dim();
    let mut current = set.clone();
    let mut point = None;
    for k in 0..n {
        let unit = QVector::unit(n, k);
        let objective = LinearObjective::new(if maximize { -&unit } else { unit.clone() });
        let sol = match lp::solve(&current, &objective)? {
            LpOutcome::Optimal(sol) => sol,
            LpOutcome::Unbounded => return Err(Error::UnboundedPolyhedron),
            LpOutcome::Infeasible => return Err(Error::EmptyPolyhedron),
        };
        let coord = sol.point[k].clone();
        current = current.with_equalities(vec![Constraint::new(unit, coord)]);
        point = Some(sol.point);
    }
    match point {
        Some(x) => Ok(x),
        None => current.feasible_point(),
    }
}

/// One plain-rule step: some point of the minimizer set chosen by `picker`.
pub fn step_plain(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    space: &Subspace,
    picker: Picker,
) -> Result<QVector> {
    let m = minimizer_set(p, c, x, space)?;
    pick(&m, x, picker)
}

fn pick(m: &Polyhedron, x: &QVector, picker: Picker) -> Result<QVector> {
    match picker {
        Picker::LexMinVertex => lex_extreme(m, false),
        Picker::LexMaxVertex => lex_extreme(m, true),
        Picker::Sticky if m.contains(x) => Ok(x.clone()),
        Picker::Sticky => lex_extreme(m, false),
        Picker::RiPoint(strategy) => m.relative_interior_point(strategy),
    }
}

/// One RI-rule step: a relative interior point of the minimizer set.
pub fn step_ri(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    space: &Subspace,
    strategy: RiStrategy,
) -> Result<QVector> {
    minimizer_set(p, c, x, space)?.relative_interior_point(strategy)
}

pub fn step(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    space: &Subspace,
    rule: Rule,
) -> Result<QVector> {
    match rule {
        Rule::Plain { picker } => step_plain(p, c, x, space, picker),
        Rule::Ri { strategy } => step_ri(p, c, x, space, strategy),
    }
}

/// One entry of a [`Trace`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub step_index: usize,
    pub direction_index: usize,
    pub point_before: QVector,
    pub point_after: QVector,
    #[serde(with = "serde_rational")]
    pub objective_after: Rational,
    pub minimizer_face_dim: usize,
    pub was_ri_selection: bool,
}

fn recorded_step(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
    direction_index: usize,
    rule: Rule,
    step_index: usize,
) -> Result<IterationRecord> {
    let m = minimizer_set(p, c, x, dirs.get(direction_index))?;
    let next = match rule {
        Rule::Plain { picker } => pick(&m, x, picker)?,
        Rule::Ri { strategy } => m.relative_interior_point(strategy)?,
    };
    let objective_after = c.eval(&next);
    debug_assert!(objective_after <= c.eval(x));
    let implicit = m.implicit_equalities_near(std::slice::from_ref(&next))?;
    Ok(IterationRecord {
        step_index,
        direction_index,
        point_before: x.clone(),
        minimizer_face_dim: m.dimension_given(&implicit),
        was_ri_selection: m.ri_membership_given(&next, &implicit),
        point_after: next,
        objective_after,
    })
}

/// `p_σ(x)`: one step per schedule entry, `σ(m)` first.
pub fn round(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
    sched: &Schedule,
    rule: Rule,
) -> Result<QVector> {
    check_directions(p, dirs)?;
    let mut current = x.clone();
    for k in sched.application_order() {
        current = step(p, c, &current, dirs.get(k), rule)?;
    }
    Ok(current)
}

/// `p(x) = p_σ^{d+1}(x)` under the RI rule, `d = dim P`.
pub fn p_operator(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
    sched: &Schedule,
    strategy: RiStrategy,
) -> Result<QVector> {
    let d = p.dimension()?;
    let rule = Rule::Ri { strategy };
    let mut current = x.clone();
    for _ in 0..=d {
        current = round(p, c, &current, dirs, sched, rule)?;
    }
    Ok(current)
}

/// First direction along which `c` can still be decreased from `x`.
pub fn improving_direction(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
) -> Result<Option<usize>> {
    check_instance(p, c, x)?;
    check_directions(p, dirs)?;
    let fx = c.eval(x);
    for (i, space) in dirs.subspaces().iter().enumerate() {
        if block_value(p, c, x, space)? != fx {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `x` minimizes `c` over `P ∩ (x + I)` for every `I`.
pub fn is_local_min(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
) -> Result<bool> {
    Ok(improving_direction(p, c, x, dirs)?.is_none())
}

/// First direction whose minimizer set does not hold `x` in its relative
/// interior.
pub fn non_interior_direction(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
) -> Result<Option<usize>> {
    check_instance(p, c, x)?;
    check_directions(p, dirs)?;
    for (i, space) in dirs.subspaces().iter().enumerate() {
        if !minimizer_set(p, c, x, space)?.ri_membership(x) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `x ∈ ri M(P ∩ (x + I), c)` for every `I`.
pub fn is_interior_local_min(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
) -> Result<bool> {
    Ok(non_interior_direction(p, c, x, dirs)?.is_none())
}

/// Decided by `c(p(x)) == c(x)`: equality makes `p(x)` an interior local
/// minimum whose smallest face contains `x`, and conversely a point inside
/// such a face never changes the objective under the RI rule.
pub fn is_pre_interior_local_min(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
    sched: &Schedule,
    strategy: RiStrategy,
) -> Result<bool> {
    check_instance(p, c, x)?;
    Ok(c.eval(&p_operator(p, c, x, dirs, sched, strategy)?) == c.eval(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The objective still decreases along this direction.
    ImprovingDirection { direction_index: usize },
    /// `p(x)`, an interior local minimum whose smallest face contains `x`.
    InteriorLocalMin { point: QVector },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_local: bool,
    pub is_interior_local: bool,
    pub is_pre_interior_local: bool,
    pub witness: Option<Witness>,
}

/// All three classifiers at once.
///
/// A point that is not a local minimum cannot be pre-interior (every point
/// of an interior local minimum's face is a local minimum), so `p(x)` is
/// only computed for local minima that are not already interior.
pub fn classify(
    p: &Polyhedron,
    c: &LinearObjective,
    x: &QVector,
    dirs: &DirectionSet,
    sched: &Schedule,
    strategy: RiStrategy,
) -> Result<Classification> {
    if let Some(i) = improving_direction(p, c, x, dirs)? {
        return Ok(Classification {
            is_local: false,
            is_interior_local: false,
            is_pre_interior_local: false,
            witness: Some(Witness::ImprovingDirection { direction_index: i }),
        });
    }
    if is_interior_local_min(p, c, x, dirs)? {
        return Ok(Classification {
            is_local: true,
            is_interior_local: true,
            is_pre_interior_local: true,
            witness: Some(Witness::InteriorLocalMin { point: x.clone() }),
        });
    }
    let px = p_operator(p, c, x, dirs, sched, strategy)?;
    let pre = c.eval(&px) == c.eval(x);
    Ok(Classification {
        is_local: true,
        is_interior_local: false,
        is_pre_interior_local: pre,
        witness: pre.then_some(Witness::InteriorLocalMin { point: px }),
    })
}

/// Every subspace of `weaker` lies inside some subspace of `stronger`.
pub fn dominates(stronger: &DirectionSet, weaker: &DirectionSet) -> bool {
    weaker
        .subspaces()
        .iter()
        .all(|w| stronger.subspaces().iter().any(|s| s.contains(w)))
}

/// Whether `P ∩ {y : c.y <= c.x}` is bounded, which rules out unbounded
/// block steps from `x` onwards.
pub fn level_set_bounded(p: &Polyhedron, c: &LinearObjective, x: &QVector) -> bool {
    p.with_inequalities(vec![Constraint::new(c.c.clone(), c.eval(x))])
        .is_bounded()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopCriteria {
    pub max_rounds: usize,
    /// Consecutive rounds with unchanged objective before stopping. Values
    /// below `dim P + 1` are raised to it.
    pub stall_rounds: usize,
}

impl Default for StopCriteria {
    fn default() -> Self {
        StopCriteria {
            max_rounds: 100,
            stall_rounds: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StopReason {
    MaxRounds,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub schema: u32,
    pub rule: Rule,
    pub polyhedron_dim: usize,
    pub records: Vec<IterationRecord>,
    pub rounds: usize,
    pub stop_reason: StopReason,
    pub final_point: QVector,
    #[serde(with = "serde_rational")]
    pub final_objective: Rational,
    /// Stalled for `d + 1` rounds under the RI rule, so the final point is
    /// an interior local minimum.
    pub certified: bool,
    pub classification: Classification,
}

impl Trace {
    /// Point after each complete round, starting with the initial point.
    pub fn round_points(&self, steps_per_round: usize) -> Vec<QVector> {
        let mut out = Vec::with_capacity(self.rounds + 1);
        if let Some(first) = self.records.first() {
            out.push(first.point_before.clone());
        }
        out.extend(
            self.records
                .chunks(steps_per_round.max(1))
                .map(|chunk| chunk[chunk.len() - 1].point_after.clone()),
        );
        out
    }
}

pub fn run(
    p: &Polyhedron,
    c: &LinearObjective,
    x0: &QVector,
    dirs: &DirectionSet,
    sched: &Schedule,
    rule: Rule,
    stop: StopCriteria,
) -> Result<Trace> {
    check_instance(p, c, x0)?;
    check_directions(p, dirs)?;
    let d = p.dimension()?;
    let stall_needed = stop.stall_rounds.max(d + 1);

    let mut records = Vec::new();
    let mut current = x0.clone();
    let mut stalled = 0;
    let mut rounds = 0;
    let mut reason = StopReason::MaxRounds;
    while rounds < stop.max_rounds {
        let before = c.eval(&current);
        for k in sched.application_order() {
            let rec = recorded_step(p, c, &current, dirs, k, rule, records.len())?;
            current = rec.point_after.clone();
            records.push(rec);
        }
        rounds += 1;
        if c.eval(&current) == before {
            stalled += 1;
        } else {
            stalled = 0;
        }
        if stalled >= stall_needed {
            reason = StopReason::Stalled;
            break;
        }
    }

    let classification = classify(p, c, &current, dirs, sched, rule.classification_strategy())?;
    Ok(Trace {
        schema: 1,
        rule,
        polyhedron_dim: d,
        records,
        rounds,
        stop_reason: reason,
        final_objective: c.eval(&current),
        certified: reason == StopReason::Stalled && matches!(rule, Rule::Ri { .. }),
        final_point: current,
        classification,
    })
}

/// Euclidean distance from `x` to the nearest target, for reporting.
pub fn distance_to_union(targets: &[Polyhedron], x: &QVector) -> Result<f64> {
    let mut best: Option<Rational> = None;
    for t in targets {
        let d = squared_distance(t, x)?;
        if best.as_ref().is_none_or(|b| d < *b) {
            best = Some(d);
        }
    }
    Ok(best.map_or(f64::INFINITY, |d| crate::geometry::to_f64(&d).sqrt()))
}
