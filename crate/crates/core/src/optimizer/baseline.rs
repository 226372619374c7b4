use std::fmt;
use std::str::FromStr;

use super::{ObjectiveValues, OptimizerError, Placement, PlacementProblem};
use crate::metrics::{betweenness_of, closeness_values, degree_stats, DistanceMatrix, Topology};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentralityMetric {
    Degree,
    Betweenness,
    Closeness,
}

impl CentralityMetric {
    pub const ALL: [CentralityMetric; 3] = [Self::Degree, Self::Betweenness, Self::Closeness];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Degree => "degree",
            Self::Betweenness => "betweenness",
            Self::Closeness => "closeness",
        }
    }
}

impl fmt::Display for CentralityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CentralityMetric {
    type Err = OptimizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| OptimizerError::InvalidArgument(format!("unknown centrality metric {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Baseline {
    pub metric: CentralityMetric,
    pub placement: Placement,
    pub values: ObjectiveValues,
}

/// Top-p candidates by a centrality score, ties by smaller id, evaluated
/// with the placement objectives at weight `w`.
///
/// Degree counts parallel pipes separately. Betweenness and closeness use
/// the simple graph; a node with no neighbours gets closeness 0.
pub fn centrality_baseline(
    problem: &PlacementProblem,
    net: &Network,
    metric: CentralityMetric,
    p: usize,
    w: f64,
) -> Result<Baseline, OptimizerError> {
    super::check_weight(w)?;
    problem.check_p(p)?;
    if !net.nodes().iter().map(|n| &n.id).eq(problem.node_ids()) {
        return Err(OptimizerError::DimensionMismatch(
            "network node order differs from the coverage relation".into(),
        ));
    }
    let topo = Topology::from_network(net);
    let scores: Vec<f64> = match metric {
        CentralityMetric::Degree => degree_stats(net).per_node.into_iter().map(|k| k as f64).collect(),
        CentralityMetric::Betweenness => betweenness_of(&topo)?,
        CentralityMetric::Closeness => closeness_values(&topo).into_iter().map(|c| c.unwrap_or(0.0)).collect(),
    };
    let ids = problem.node_ids();
    let mut order: Vec<usize> = problem.candidates().to_vec();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then_with(|| ids[a].cmp(&ids[b])));
    order.truncate(p);
    let placement = Placement::from_indices(ids, &order);
    let values = problem.evaluate(&placement, w)?;
    Ok(Baseline {
        metric,
        placement,
        values,
    })
}

/// Mean pairwise hop distance between sensors; 0 for a single sensor.
/// Sensors in different components yield `DisconnectedPlacement` with the
/// mean within each group of mutually reachable sensors.
pub fn dispersion(placement: &Placement, dm: &DistanceMatrix) -> Result<f64, OptimizerError> {
    let idx = placement.indices();
    if let Some(&bad) = idx.iter().find(|&&j| j >= dm.node_count()) {
        return Err(OptimizerError::DimensionMismatch(format!("sensor index {bad} outside the distance matrix")));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &j in idx {
        match groups.iter_mut().find(|g| dm.get(g[0], j).is_some()) {
            Some(g) => g.push(j),
            None => groups.push(vec![j]),
        }
    }
    let mean = |g: &[usize]| {
        let mut sum = 0u64;
        let mut pairs = 0u64;
        for (a, &x) in g.iter().enumerate() {
            for &y in &g[a + 1..] {
                sum += u64::from(dm.get(x, y).expect("same component"));
                pairs += 1;
            }
        }
        if pairs == 0 {
            0.0
        } else {
            sum as f64 / pairs as f64
        }
    };
    match groups.as_slice() {
        [] => Ok(0.0),
        [g] => Ok(mean(g)),
        _ => Err(OptimizerError::DisconnectedPlacement {
            component_means: groups.iter().map(|g| mean(g)).collect(),
        }),
    }
}
