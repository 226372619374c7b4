use super::centrality::{betweenness_of, closeness_values, clustering_of, degree_stats};
use super::percolation::{critical_fraction, CriticalFraction, CriticalFractionMode};
use super::topology::{DistanceMatrix, Topology};
use super::MetricsError;
use crate::network::Network;

/// Network-level metric row.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub node_count: usize,
    /// Pipes, pumps and valves.
    pub link_count: usize,
    pub pipe_count: usize,
    pub k_max: usize,
    /// 2·link_count / N.
    pub mean_degree: f64,
    pub mean_path_length: f64,
    pub clustering_avg: f64,
    pub diameter: u32,
    pub critical_fraction: CriticalFraction,
    /// Mean over all nodes; 0 when N < 3.
    pub betweenness_mean: f64,
    /// Mean over non-isolated nodes.
    pub closeness_mean: f64,
    pub connected: bool,
}

pub fn metric_summary(net: &Network, fc_mode: CriticalFractionMode) -> Result<MetricSummary, MetricsError> {
    let topo = Topology::from_network(net);
    let dm = DistanceMatrix::from_topology(&topo);
    let degrees = degree_stats(net);
    let n = net.node_count();

    let betweenness_mean = match betweenness_of(&topo) {
        Ok(b) => b.iter().sum::<f64>() / n as f64,
        Err(MetricsError::DegenerateGraph(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let closeness: Vec<f64> = closeness_values(&topo).into_iter().flatten().collect();
    let closeness_mean = if closeness.is_empty() {
        0.0
    } else {
        closeness.iter().sum::<f64>() / closeness.len() as f64
    };

    Ok(MetricSummary {
        node_count: n,
        link_count: net.link_count(),
        pipe_count: net.pipe_count(),
        k_max: degrees.k_max,
        mean_degree: degrees.mean_degree,
        mean_path_length: dm.mean_path_length(),
        clustering_avg: clustering_of(&topo).average,
        diameter: dm.diameter(),
        critical_fraction: critical_fraction(net, fc_mode)?,
        betweenness_mean,
        closeness_mean,
        connected: dm.is_connected(),
    })
}
