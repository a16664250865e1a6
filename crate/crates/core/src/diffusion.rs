//! Max-sum diffusion on tiny pairwise models, and its block subproblem
//! expressed as a polyhedral minimization the descent engine can inspect.
//!
//! A reparametrization `φ` holds one shift `φ_{e,u}(i)` per edge `e`,
//! endpoint `u` of `e` and label `i` of `u`. It moves cost from edges onto
//! nodes:
//!
//! ```text
//! θφ_u(i)   = θ_u(i) + Σ_{e ∋ u} φ_{e,u}(i)
//! θφ_e(i,j) = θ_e(i,j) - φ_{e,u}(i) - φ_{e,v}(j)        for e = (u, v)
//! ```
//!
//! and the dual bound is `Σ_u min_i θφ_u(i) + Σ_e min_ij θφ_e(i,j)`.

use itertools::Itertools;
use num_traits::Zero;
use serde::{de, Deserialize, Deserializer, Serialize};

use crate::descent;
use crate::epigraph::{self, EpigraphProblem, PiecewiseAffine};
use crate::error::{Error, Result};
use crate::geometry::{int, QVector, Rational, Subspace};
use crate::polyhedron::{Constraint, Polyhedron};

pub const MAX_NODES: usize = 4;
pub const MAX_LABELS: usize = 3;
pub const MAX_SHIFT_COORDS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairwiseEdge {
    pub uv: [usize; 2],
    /// `costs[i][j]` for label `i` of `uv[0]` and `j` of `uv[1]`.
    pub costs: Vec<QVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairwiseModel {
    nodes: usize,
    labels: Vec<usize>,
    unary: Vec<QVector>,
    edges: Vec<PairwiseEdge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    nodes: usize,
    labels: Vec<usize>,
    unary: Vec<QVector>,
    #[serde(default)]
    edges: Vec<PairwiseEdge>,
}

impl<'de> Deserialize<'de> for PairwiseModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ModelJson::deserialize(d)?;
        PairwiseModel::new(raw.nodes, raw.labels, raw.unary, raw.edges).map_err(de::Error::custom)
    }
}

/// One diffusion block: the shifts `φ_{edge,node}(·)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pivot {
    pub node: usize,
    pub edge: usize,
}

/// Flat vector of all shifts, laid out edge by edge, `uv[0]` before `uv[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reparametrization {
    pub phi: QVector,
}

impl PairwiseModel {
    pub fn new(
        nodes: usize,
        labels: Vec<usize>,
        unary: Vec<QVector>,
        edges: Vec<PairwiseEdge>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        if labels.len() != nodes || unary.len() != nodes {
            return invalid(format!(
                "{nodes} nodes but {} label counts and {} unary rows",
                labels.len(),
                unary.len()
            ));
        }
        for (u, (&k, row)) in labels.iter().zip(&unary).enumerate() {
            if k == 0 {
                return invalid(format!("node {u} has no labels"));
            }
            if row.dim() != k {
                return invalid(format!(
                    "node {u}: {} unary costs for {k} labels",
                    row.dim()
                ));
            }
        }
        for (e, edge) in edges.iter().enumerate() {
            let [u, v] = edge.uv;
            if u >= nodes || v >= nodes || u == v {
                return invalid(format!("edge {e} has invalid endpoints {u}, {v}"));
            }
            if edge.costs.len() != labels[u] || edge.costs.iter().any(|r| r.dim() != labels[v]) {
                return invalid(format!(
                    "edge {e}: cost table is not {}x{}",
                    labels[u], labels[v]
                ));
            }
        }
        Ok(PairwiseModel {
            nodes,
            labels,
            unary,
            edges,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn edges(&self) -> &[PairwiseEdge] {
        &self.edges
    }

    pub fn shift_dim(&self) -> usize {
        self.edges
            .iter()
            .map(|e| self.labels[e.uv[0]] + self.labels[e.uv[1]])
            .sum()
    }

    pub fn zero_shift(&self) -> Reparametrization {
        Reparametrization {
            phi: QVector::zeros(self.shift_dim()),
        }
    }

    /// Offset of `φ_{edge, uv[side]}(0)` in the flat vector.
    fn offset(&self, edge: usize, side: usize) -> usize {
        let before: usize = self.edges[..edge]
            .iter()
            .map(|e| self.labels[e.uv[0]] + self.labels[e.uv[1]])
            .sum();
        before
            + if side == 0 {
                0
            } else {
                self.labels[self.edges[edge].uv[0]]
            }
    }

    fn side(&self, pivot: Pivot) -> Result<usize> {
        let edge = self
            .edges
            .get(pivot.edge)
            .ok_or_else(|| Error::InvalidModel(format!("no edge {}", pivot.edge)))?;
        edge.uv
            .iter()
            .position(|&u| u == pivot.node)
            .ok_or_else(|| {
                Error::InvalidModel(format!("node {} is not on edge {}", pivot.node, pivot.edge))
            })
    }

    /// Every (endpoint, edge) block, edge by edge.
    pub fn pivots(&self) -> Vec<Pivot> {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(e, edge)| edge.uv.map(|node| Pivot { node, edge: e }))
            .collect()
    }

    fn check_shift(&self, phi: &Reparametrization) -> Result<()> {
        if phi.phi.dim() != self.shift_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.shift_dim(),
                found: phi.phi.dim(),
            });
        }
        Ok(())
    }

    /// `θφ_u(i)`.
    pub fn node_cost(&self, phi: &Reparametrization, u: usize, i: usize) -> Rational {
        let mut cost = self.unary[u][i].clone();
        for (e, edge) in self.edges.iter().enumerate() {
            for side in 0..2 {
                if edge.uv[side] == u {
                    cost += &phi.phi[self.offset(e, side) + i];
                }
            }
        }
        cost
    }

    /// `θφ_e(i,j)`.
    pub fn edge_cost(&self, phi: &Reparametrization, e: usize, i: usize, j: usize) -> Rational {
        &self.edges[e].costs[i][j]
            - &phi.phi[self.offset(e, 0) + i]
            - &phi.phi[self.offset(e, 1) + j]
    }

    /// `min_i θφ_u(i)`.
    pub fn node_min(&self, phi: &Reparametrization, u: usize) -> Rational {
        (0..self.labels[u])
            .map(|i| self.node_cost(phi, u, i))
            .min()
            .expect("labels are positive")
    }

    /// `min_ij θφ_e(i,j)`.
    pub fn edge_min(&self, phi: &Reparametrization, e: usize) -> Rational {
        let [u, v] = self.edges[e].uv;
        (0..self.labels[u])
            .cartesian_product(0..self.labels[v])
            .map(|(i, j)| self.edge_cost(phi, e, i, j))
            .min()
            .expect("labels are positive")
    }

    /// Min over the pivot edge's table with the pivot node's label fixed.
    fn marginal_on_side(
        &self,
        phi: &Reparametrization,
        pivot: Pivot,
        side: usize,
        i: usize,
    ) -> Rational {
        let [u, v] = self.edges[pivot.edge].uv;
        let other = if side == 0 {
            self.labels[v]
        } else {
            self.labels[u]
        };
        (0..other)
            .map(|j| {
                if side == 0 {
                    self.edge_cost(phi, pivot.edge, i, j)
                } else {
                    self.edge_cost(phi, pivot.edge, j, i)
                }
            })
            .min()
            .expect("labels are positive")
    }

    /// `min_j θφ_e(i,j)` for label `i` of the pivot node.
    pub fn min_marginal(&self, phi: &Reparametrization, pivot: Pivot, i: usize) -> Result<Rational> {
        let side = self.side(pivot)?;
        Ok(self.marginal_on_side(phi, pivot, side, i))
    }

    /// Energy of a full labeling under the original costs.
    pub fn energy(&self, labeling: &[usize]) -> Rational {
        let mut total: Rational = (0..self.nodes)
            .map(|u| self.unary[u][labeling[u]].clone())
            .sum();
        for edge in &self.edges {
            total += &edge.costs[labeling[edge.uv[0]]][labeling[edge.uv[1]]];
        }
        total
    }

    /// Minimum energy by enumerating every labeling.
    pub fn brute_force_minimum(&self) -> Rational {
        self.labels
            .iter()
            .map(|&k| 0..k)
            .multi_cartesian_product()
            .map(|labeling| self.energy(&labeling))
            .min()
            .unwrap_or_else(Rational::zero)
    }

    fn check_guard(&self) -> Result<()> {
        if self.nodes > MAX_NODES
            || self.labels.iter().any(|&k| k > MAX_LABELS)
            || self.shift_dim() > MAX_SHIFT_COORDS
        {
            return Err(Error::ModelTooLarge(format!(
                "{} nodes, up to {} labels, {} shift coordinates (limits {MAX_NODES}, {MAX_LABELS}, {MAX_SHIFT_COORDS})",
                self.nodes,
                self.labels.iter().max().copied().unwrap_or(0),
                self.shift_dim()
            )));
        }
        Ok(())
    }
}

pub fn dual_bound(m: &PairwiseModel, phi: &Reparametrization) -> Result<Rational> {
    m.check_shift(phi)?;
    let nodes: Rational = (0..m.nodes).map(|u| m.node_min(phi, u)).sum();
    let edges: Rational = (0..m.edges.len()).map(|e| m.edge_min(phi, e)).sum();
    Ok(nodes + edges)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionVariant {
    /// Split the gap between node cost and min-marginal evenly.
    #[default]
    Averaging,
    /// Move the whole min-marginal onto the node.
    OneSided,
}

/// Update of the pivot block; the averaging variant equalizes
/// `θφ_u(i)` with `min_j θφ_e(i,j)` for every label `i`.
pub fn diffusion_step(
    m: &PairwiseModel,
    phi: &Reparametrization,
    pivot: Pivot,
    variant: DiffusionVariant,
) -> Result<Reparametrization> {
    m.check_shift(phi)?;
    let side = m.side(pivot)?;
    let start = m.offset(pivot.edge, side);
    let mut next = phi.phi.clone().into_coords();
    for i in 0..m.labels[pivot.node] {
        let marginal = m.marginal_on_side(phi, pivot, side, i);
        let delta = match variant {
            DiffusionVariant::Averaging => (marginal - m.node_cost(phi, pivot.node, i)) / int(2),
            DiffusionVariant::OneSided => marginal,
        };
        next[start + i] += delta;
    }
    Ok(Reparametrization { phi: next.into() })
}

/// One pass of averaging steps over every pivot.
pub fn sweep(m: &PairwiseModel, phi: &Reparametrization) -> Result<Reparametrization> {
    m.pivots().into_iter().try_fold(phi.clone(), |acc, pivot| {
        diffusion_step(m, &acc, pivot, DiffusionVariant::Averaging)
    })
}

/// The negated bound as a polyhedral minimization around one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualBlock {
    /// Variables `(φ, s, t)`: one `s` per node then per edge, bounded above
    /// by every entry of its term, and `t >= -Σ s`.
    pub problem: EpigraphProblem,
    /// The pivot's shift coordinates inside `φ`-space.
    pub block: Subspace,
    /// Search direction in the lifted space: the block, the two `s`
    /// variables it affects and `t`.
    pub direction: Subspace,
    /// `(φ, s(φ), -bound(φ))` with each `s` at its term minimum.
    pub point: QVector,
}

impl DualBlock {
    pub fn minimizer_set(&self) -> Result<Polyhedron> {
        descent::minimizer_set(
            &self.problem.lifted,
            &self.problem.objective,
            &self.point,
            &self.direction,
        )
    }
}

/// Lifted image of a reparametrization in the block encoding.
pub fn encode_point(m: &PairwiseModel, phi: &Reparametrization) -> Result<QVector> {
    m.check_shift(phi)?;
    let mins: Vec<Rational> = (0..m.nodes)
        .map(|u| m.node_min(phi, u))
        .chain((0..m.edges.len()).map(|e| m.edge_min(phi, e)))
        .collect();
    let total: Rational = mins.iter().sum();
    let mut coords = phi.phi.clone().into_coords();
    coords.extend(mins);
    coords.push(-total);
    Ok(coords.into())
}

pub fn encode_dual_block(
    m: &PairwiseModel,
    phi: &Reparametrization,
    pivot: Pivot,
) -> Result<DualBlock> {
    m.check_guard()?;
    m.check_shift(phi)?;
    let side = m.side(pivot)?;
    let p = m.shift_dim();
    let n = p + m.nodes + m.edges.len();
    let s_node = |u: usize| p + u;
    let s_edge = |e: usize| p + m.nodes + e;

    // s_u - θ_u(i) - Σ φ_{e,u}(i) <= 0
    let mut rows = Vec::new();
    for u in 0..m.nodes {
        for i in 0..m.labels[u] {
            let mut a = vec![int(0); n];
            a[s_node(u)] = int(1);
            for (e, edge) in m.edges.iter().enumerate() {
                for sd in 0..2 {
                    if edge.uv[sd] == u {
                        a[m.offset(e, sd) + i] = int(-1);
                    }
                }
            }
            rows.push(Constraint::new(a.into(), m.unary[u][i].clone()));
        }
    }
    // s_e + φ_{e,u}(i) + φ_{e,v}(j) <= θ_e(i,j)
    for (e, edge) in m.edges.iter().enumerate() {
        let [u, v] = edge.uv;
        for (i, j) in (0..m.labels[u]).cartesian_product(0..m.labels[v]) {
            let mut a = vec![int(0); n];
            a[s_edge(e)] = int(1);
            a[m.offset(e, 0) + i] = int(1);
            a[m.offset(e, 1) + j] = int(1);
            rows.push(Constraint::new(a.into(), edge.costs[i][j].clone()));
        }
    }
    let base = Polyhedron::new(n, rows, Vec::new())?;
    let mut neg_sum = vec![int(0); n];
    for k in p..n {
        neg_sum[k] = int(-1);
    }
    let f = PiecewiseAffine::linear(neg_sum.into());
    let problem = epigraph::lift(&base, &f)?;

    let start = m.offset(pivot.edge, side);
    let axes: Vec<usize> = (start..start + m.labels[pivot.node]).collect();
    let block = Subspace::coordinate(p, &axes);
    let mut lifted_axes = axes;
    lifted_axes.extend([s_node(pivot.node), s_edge(pivot.edge)]);
    let direction = epigraph::lift_direction(&Subspace::coordinate(n, &lifted_axes));

    Ok(DualBlock {
        problem,
        block,
        direction,
        point: encode_point(m, phi)?,
    })
}

/// Whether the diffusion update lands in the relative interior of the
/// block minimizer set of the encoding.
pub fn verify_ri_property(
    m: &PairwiseModel,
    phi: &Reparametrization,
    pivot: Pivot,
    variant: DiffusionVariant,
) -> Result<bool> {
    let block = encode_dual_block(m, phi, pivot)?;
    let next = encode_point(m, &diffusion_step(m, phi, pivot, variant)?)?;
    Ok(block.minimizer_set()?.ri_membership(&next))
}
