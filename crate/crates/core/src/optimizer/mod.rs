//! Bi-objective sensor placement.
//!
//! F1 is the normalised count of undetected (source, scenario) pairs,
//! F1 = Σ_s Σ_i y(i,s) / (N(N−1)), to be minimised. F2 is the sum over
//! selected sensors of normalised demand-adjusted entropic degree times the
//! node's average-node-coverage term, to be maximised. Both are combined as
//! F = W·F1 − (1−W)·F2 and minimised over sets of exactly p sensors.
//!
//! Tables report F2 with a negative sign (`f2_reported`), so
//! F = W·F1 + (1−W)·f2_reported.
//!
//! Ties between equal-scalar placements are broken by the lexicographically
//! smallest sorted sequence of node ids.

mod baseline;
mod exact;
mod greedy;
mod pareto;

use thiserror::Error;

use crate::metrics::{AncTermTable, NodeWeightTable};
use crate::network::{NodeId, NodeKind};
use crate::scenario::CoverageRelation;

pub use baseline::{centrality_baseline, dispersion, Baseline, CentralityMetric};
pub use exact::{solve_exact, solve_exhaustive, SolverOptions};
pub use greedy::solve_greedy;
pub use pareto::{most_frequent, pareto_sweep, weight_grid, ParetoRecord};

pub const DEFAULT_SENSORS: usize = 5;
pub const DEFAULT_GRID_STEP: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot place {p} sensors on {candidates} candidate nodes")]
    InfeasibleCardinality { p: usize, candidates: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("placement spans several components; per-component mean distances {component_means:?}")]
    DisconnectedPlacement { component_means: Vec<f64> },
    #[error(transparent)]
    Metrics(#[from] crate::metrics::MetricsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidatePolicy {
    #[default]
    AllNodes,
    JunctionsOnly,
}

/// A set of sensor nodes, kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    ids: Vec<NodeId>,
    indices: Vec<usize>,
}

impl Placement {
    /// `node_ids` is the node order that `indices` refer to.
    pub fn from_indices(node_ids: &[NodeId], indices: &[usize]) -> Self {
        let mut pairs: Vec<(NodeId, usize)> = indices.iter().map(|&i| (node_ids[i].clone(), i)).collect();
        pairs.sort();
        pairs.dedup();
        let (ids, indices) = pairs.into_iter().unzip();
        Placement { ids, indices }
    }

    pub fn from_ids(node_ids: &[NodeId], sensors: &[NodeId]) -> Result<Self, OptimizerError> {
        let indices = sensors
            .iter()
            .map(|s| {
                node_ids
                    .iter()
                    .position(|id| id == s)
                    .ok_or_else(|| OptimizerError::UnknownNode(s.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let placement = Self::from_indices(node_ids, &indices);
        if placement.len() != sensors.len() {
            return Err(OptimizerError::InvalidArgument("placement lists a sensor twice".into()));
        }
        Ok(placement)
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Ids joined by single spaces.
    pub fn joined(&self) -> String {
        self.ids.iter().map(NodeId::as_str).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValues {
    pub w: f64,
    pub f1: f64,
    pub f2: f64,
    /// −f2, the sign used in report tables.
    pub f2_reported: f64,
    /// w·f1 − (1−w)·f2
    pub scalar: f64,
}

impl ObjectiveValues {
    pub fn new(f1: f64, f2: f64, w: f64) -> Self {
        ObjectiveValues {
            w,
            f1,
            f2,
            f2_reported: -f2,
            scalar: scalarize(f1, f2, w),
        }
    }

    pub fn at(&self, w: f64) -> Self {
        Self::new(self.f1, self.f2, w)
    }
}

/// W·F1 − (1−W)·F2.
pub fn scalarize(f1: f64, f2: f64, w: f64) -> f64 {
    w * f1 - (1.0 - w) * f2
}

/// Same as [`scalarize`] with F2 given in the reported (negated) sign.
pub fn scalarize_reported(f1: f64, f2_reported: f64, w: f64) -> f64 {
    w * f1 + (1.0 - w) * f2_reported
}

/// y(i, s) per pair index `s * N + i`: true when no sensor detects the pair.
pub fn uncovered_indicator(placement: &Placement, rel: &CoverageRelation) -> Result<Vec<bool>, OptimizerError> {
    check_indices(placement, rel.node_count())?;
    let n = rel.node_count();
    Ok((0..rel.scenario_count())
        .flat_map(|s| (0..n).map(move |i| (i, s)))
        .map(|(i, s)| !placement.indices().iter().any(|&j| rel.covers(i, j, s)))
        .collect())
}

fn check_indices(placement: &Placement, n: usize) -> Result<(), OptimizerError> {
    if let Some(&bad) = placement.indices().iter().find(|&&j| j >= n) {
        return Err(OptimizerError::DimensionMismatch(format!(
            "sensor index {bad} outside a {n}-node relation"
        )));
    }
    Ok(())
}

fn f1_normaliser(n: usize) -> Result<f64, OptimizerError> {
    if n < 2 {
        return Err(OptimizerError::DimensionMismatch(format!("F1 needs at least 2 nodes, got {n}")));
    }
    Ok((n * (n - 1)) as f64)
}

pub fn evaluate_f1(placement: &Placement, rel: &CoverageRelation) -> Result<f64, OptimizerError> {
    let uncovered = uncovered_indicator(placement, rel)?.into_iter().filter(|&y| y).count();
    Ok(uncovered as f64 / f1_normaliser(rel.node_count())?)
}

pub fn evaluate_f2(
    placement: &Placement,
    weights: &NodeWeightTable,
    anc: &AncTermTable,
) -> Result<f64, OptimizerError> {
    let n = weights.rows.len();
    if anc.rows.len() != n {
        return Err(OptimizerError::DimensionMismatch("weight and ANC tables differ in length".into()));
    }
    check_indices(placement, n)?;
    Ok(placement
        .indices()
        .iter()
        .fold(0.0, |acc, &j| acc + weights.rows[j].f_norm * anc.rows[j].anc))
}

/// Precomputed inputs shared by every solver.
#[derive(Debug, Clone)]
pub struct PlacementProblem<'a> {
    rel: &'a CoverageRelation,
    /// f_norm·anc per node.
    gains: Vec<f64>,
    /// Candidate node indices sorted by node id; the position is the rank
    /// used for tie-breaking.
    candidates: Vec<usize>,
    normaliser: f64,
}

impl<'a> PlacementProblem<'a> {
    pub fn new(
        rel: &'a CoverageRelation,
        weights: &NodeWeightTable,
        anc: &AncTermTable,
        policy: CandidatePolicy,
    ) -> Result<Self, OptimizerError> {
        let n = rel.node_count();
        if weights.rows.len() != n || anc.rows.len() != n {
            return Err(OptimizerError::DimensionMismatch(format!(
                "relation has {n} nodes, weights {}, ANC {}",
                weights.rows.len(),
                anc.rows.len()
            )));
        }
        if let Some(row) = weights.rows.iter().zip(rel.node_ids()).find(|(r, id)| &r.id != *id) {
            return Err(OptimizerError::DimensionMismatch(format!(
                "weight table node {} does not match relation node order",
                row.0.id
            )));
        }
        let gains = weights.rows.iter().zip(&anc.rows).map(|(w, a)| w.f_norm * a.anc).collect();
        let kinds: Vec<NodeKind> = weights.rows.iter().map(|r| r.kind).collect();
        Self::from_parts(rel, gains, &kinds, policy)
    }

    /// Builds a problem from raw per-node F2 gains.
    pub fn from_parts(
        rel: &'a CoverageRelation,
        gains: Vec<f64>,
        kinds: &[NodeKind],
        policy: CandidatePolicy,
    ) -> Result<Self, OptimizerError> {
        let n = rel.node_count();
        if gains.len() != n || kinds.len() != n {
            return Err(OptimizerError::DimensionMismatch("per-node inputs must match the relation".into()));
        }
        if gains.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(OptimizerError::InvalidArgument("F2 gains must be finite and non-negative".into()));
        }
        let mut candidates: Vec<usize> = (0..n)
            .filter(|&j| policy == CandidatePolicy::AllNodes || kinds[j] == NodeKind::Junction)
            .collect();
        candidates.sort_by(|&a, &b| rel.node_ids()[a].cmp(&rel.node_ids()[b]));
        Ok(PlacementProblem {
            rel,
            gains,
            candidates,
            normaliser: f1_normaliser(n)?,
        })
    }

    pub fn relation(&self) -> &CoverageRelation {
        self.rel
    }

    pub fn node_ids(&self) -> &[NodeId] {
        self.rel.node_ids()
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    fn check_p(&self, p: usize) -> Result<(), OptimizerError> {
        if p > self.candidates.len() {
            return Err(OptimizerError::InfeasibleCardinality {
                p,
                candidates: self.candidates.len(),
            });
        }
        Ok(())
    }

    fn uncovered_count(&self, covered: &[u64]) -> usize {
        self.rel.pair_count() - covered.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    /// Canonical evaluation: `ranks` ascending, F2 summed in that order.
    fn evaluate_ranks(&self, ranks: &[usize], w: f64) -> ObjectiveValues {
        let mut covered = vec![0u64; self.rel.words_per_row()];
        let mut f2 = 0.0;
        for &r in ranks {
            let j = self.candidates[r];
            for (c, x) in covered.iter_mut().zip(self.rel.sensor_row(j)) {
                *c |= x;
            }
            f2 += self.gains[j];
        }
        ObjectiveValues::new(self.uncovered_count(&covered) as f64 / self.normaliser, f2, w)
    }

    fn placement_of(&self, ranks: &[usize]) -> Placement {
        let idx: Vec<usize> = ranks.iter().map(|&r| self.candidates[r]).collect();
        Placement::from_indices(self.node_ids(), &idx)
    }

    /// Evaluates any placement of candidate nodes.
    pub fn evaluate(&self, placement: &Placement, w: f64) -> Result<ObjectiveValues, OptimizerError> {
        let mut ranks = placement
            .indices()
            .iter()
            .map(|j| {
                self.candidates
                    .iter()
                    .position(|c| c == j)
                    .ok_or_else(|| OptimizerError::UnknownNode(self.node_ids()[*j].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ranks.sort_unstable();
        Ok(self.evaluate_ranks(&ranks, w))
    }
}

fn check_weight(w: f64) -> Result<(), OptimizerError> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(OptimizerError::InvalidArgument(format!("weight {w} outside [0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{anc_terms, demand_adjusted, LogBase};
    use crate::network::fixtures;

    #[test]
    fn scalarization_rows() {
        assert!((scalarize_reported(1.971, -0.580, 0.35) - 0.313).abs() < 1e-3);
        assert_eq!(scalarize_reported(1.5, -0.173, 1.0), 1.5);
        assert!((scalarize_reported(1.971, -0.580, 0.05) - (-0.453)).abs() < 1e-3);
        assert_eq!(scalarize(2.0, 3.0, 0.25), 0.5 - 2.25);
        let v = ObjectiveValues::new(1.5, 0.173, 1.0);
        assert_eq!(v.scalar, v.f1);
        assert_eq!(v.f2_reported, -0.173);
    }

    #[test]
    fn worst_case_f1() {
        let ids: Vec<NodeId> = (0..129).map(|i| NodeId::new(format!("J{i}")).unwrap()).collect();
        let rel = CoverageRelation::empty(ids.clone(), 288, 7200);
        let placement = Placement::from_indices(&ids, &[0, 1, 2, 3, 4]);
        assert_eq!(evaluate_f1(&placement, &rel).unwrap(), 2.25);
    }

    #[test]
    fn full_cover_f1_is_zero() {
        let ids: Vec<NodeId> = ["a", "b", "c"].iter().map(|&s| s.into()).collect();
        let mut rel = CoverageRelation::empty(ids.clone(), 2, 10);
        for s in 0..2 {
            for i in 0..3 {
                rel.set(i, 2, s);
            }
        }
        let p = Placement::from_indices(&ids, &[2]);
        assert_eq!(evaluate_f1(&p, &rel).unwrap(), 0.0);
        assert!(uncovered_indicator(&p, &rel).unwrap().iter().all(|y| !y));
        let outside = Placement::from_indices(&[ids.clone(), vec!["d".into()]].concat(), &[3]);
        assert!(matches!(evaluate_f1(&outside, &rel), Err(OptimizerError::DimensionMismatch(_))));
    }

    #[test]
    fn f2_connected_graph_law() {
        let net = fixtures::cycle(6);
        let weights = demand_adjusted(&net, LogBase::Natural);
        let anc = anc_terms(&net);
        let ids: Vec<NodeId> = net.nodes().iter().map(|n| n.id.clone()).collect();
        let p = Placement::from_indices(&ids, &[1, 4]);
        let f2 = evaluate_f2(&p, &weights, &anc).unwrap();
        let expected = 5.0 / 3.0 * (weights.rows[1].f_norm + weights.rows[4].f_norm);
        assert!((f2 - expected).abs() < 1e-15);
    }

    #[test]
    fn placement_order_and_lookup() {
        let ids: Vec<NodeId> = ["b", "a", "c"].iter().map(|&s| s.into()).collect();
        let p = Placement::from_indices(&ids, &[2, 0, 1]);
        assert_eq!(p.joined(), "a b c");
        assert_eq!(p.indices(), &[1, 0, 2]);
        assert!(Placement::from_ids(&ids, &["z".into()]).is_err());
        assert!(Placement::from_ids(&ids, &["a".into(), "a".into()]).is_err());
    }
}
