//! JSON formats for polyhedra, descent instances, piecewise-affine
//! functions and pairwise models.
//!
//! Rationals are written as `"p/q"` strings; plain JSON integers are
//! accepted on input.

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::descent::{DirectionSet, Picker, Rule, Schedule, StopCriteria};
use crate::diffusion::PairwiseModel;
use crate::epigraph::PiecewiseAffine;
use crate::error::Error;
use crate::geometry::{QVector, Subspace};
use crate::lp::LinearObjective;
use crate::polyhedron::{Constraint, Polyhedron, RiStrategy};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Invalid(#[from] Error),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyhedronJson {
    dim: usize,
    #[serde(default)]
    ineq: Vec<Constraint>,
    #[serde(default)]
    eq: Vec<Constraint>,
}

impl Serialize for Polyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyhedronJson {
            dim: self.ambient_dim(),
            ineq: self.ineqs().to_vec(),
            eq: self.eqs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyhedronJson::deserialize(d)?;
        Polyhedron::new(raw.dim, raw.ineq, raw.eq).map_err(de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleName {
    #[default]
    Ri,
    Plain,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    polyhedron: Polyhedron,
    objective: QVector,
    directions: Vec<Vec<QVector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<usize>>,
    start: QVector,
    #[serde(default)]
    rule: RuleName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strategy: Option<RiStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    picker: Option<Picker>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stall_rounds: Option<usize>,
}

/// Everything needed for one descent run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub polyhedron: Polyhedron,
    pub objective: LinearObjective,
    pub directions: DirectionSet,
    pub schedule: Schedule,
    pub start: QVector,
    pub rule: Rule,
    pub stop: StopCriteria,
}

impl Instance {
    fn from_raw(raw: InstanceJson) -> Result<Self, Error> {
        let n = raw.polyhedron.ambient_dim();
        for found in [raw.objective.dim(), raw.start.dim()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        let directions = DirectionSet::new(
            raw.directions
                .into_iter()
                .map(|basis| Subspace::new(basis, n))
                .collect::<Result<_, _>>()?,
        )?;
        let schedule = match raw.schedule {
            Some(order) => Schedule::new(order, directions.len())?,
            None => Schedule::cyclic(directions.len()),
        };
        let strategy = raw.strategy.unwrap_or_default();
        let rule = match raw.rule {
            RuleName::Ri => Rule::Ri { strategy },
            RuleName::Plain => Rule::Plain {
                picker: raw.picker.unwrap_or(Picker::LexMinVertex),
            },
        };
        let defaults = StopCriteria::default();
        Ok(Instance {
            polyhedron: raw.polyhedron,
            objective: LinearObjective::new(raw.objective),
            directions,
            schedule,
            start: raw.start,
            rule,
            stop: StopCriteria {
                max_rounds: raw.max_rounds.unwrap_or(defaults.max_rounds),
                stall_rounds: raw.stall_rounds.unwrap_or(defaults.stall_rounds),
            },
        })
    }

    fn to_raw(&self) -> InstanceJson {
        let (rule, strategy, picker) = match self.rule {
            Rule::Ri { strategy } => (RuleName::Ri, Some(strategy), None),
            Rule::Plain { picker } => (RuleName::Plain, None, Some(picker)),
        };
        InstanceJson {
            polyhedron: self.polyhedron.clone(),
            objective: self.objective.c.clone(),
            directions: self
                .directions
                .subspaces()
                .iter()
                .map(|s| s.basis().to_vec())
                .collect(),
            schedule: Some(self.schedule.order().to_vec()),
            start: self.start.clone(),
            rule,
            strategy,
            picker,
            max_rounds: Some(self.stop.max_rounds),
            stall_rounds: Some(self.stop.stall_rounds),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes")
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Instance::from_raw(InstanceJson::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// Serde reports validation failures raised inside `Deserialize` as JSON
/// errors; parse the raw form first so they surface as [`LoadError::Invalid`].
pub fn parse_instance(text: &str) -> Result<Instance, LoadError> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    Ok(Instance::from_raw(raw)?)
}

pub fn parse_polyhedron(text: &str) -> Result<Polyhedron, LoadError> {
    let raw: PolyhedronJson = serde_json::from_str(text)?;
    Ok(Polyhedron::new(raw.dim, raw.ineq, raw.eq)?)
}

pub fn parse_piecewise(text: &str) -> Result<PiecewiseAffine, LoadError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_model(text: &str) -> Result<PairwiseModel, LoadError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;

    #[test]
    fn polyhedron_round_trip() {
        let p = demo::trapezoid();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.starts_with(r#"{"dim":2,"ineq":[{"a":["1","0"],"b":"3"}"#));
        assert_eq!(parse_polyhedron(&text).unwrap(), p);
    }

    #[test]
    fn instance_round_trip() {
        let inst = demo::worked_example(QVector::from_ints(&[1, 3]));
        let back = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn instance_defaults_and_aliases() {
        let text = r#"{
            "polyhedron": {"dim": 1, "ineq": [{"a": [1], "b": "1/2"}, {"a": ["-1"], "b": 0}]},
            "objective": ["1"],
            "directions": [[["1"]]],
            "start": ["1/4"],
            "strategy": "barycenter"
        }"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(
            inst.rule,
            Rule::Ri {
                strategy: RiStrategy::VertexBarycenter
            }
        );
        assert_eq!(inst.schedule.order(), &[0]);
    }

    #[test]
    fn rejects_invalid_instances() {
        assert!(matches!(parse_instance("{"), Err(LoadError::Syntax(_))));
        let dependent = r#"{
            "polyhedron": {"dim": 2},
            "objective": [0, 0],
            "directions": [[[1, 0], [2, 0]]],
            "start": [0, 0]
        }"#;
        assert!(matches!(
            parse_instance(dependent),
            Err(LoadError::Invalid(Error::DependentBasis))
        ));
        let bad_schedule = r#"{
            "polyhedron": {"dim": 1},
            "objective": [0],
            "directions": [[[1]], []],
            "schedule": [0, 0],
            "start": [0]
        }"#;
        assert!(matches!(
            parse_instance(bad_schedule),
            Err(LoadError::Invalid(Error::InvalidSchedule(_)))
        ));
        assert!(parse_polyhedron(r#"{"dim": 2, "ineq": [{"a": [1], "b": 0}]}"#).is_err());
        assert!(parse_polyhedron(r#"{"dim": 1, "ineq": [{"a": ["1/0"], "b": 0}]}"#).is_err());
    }
}
