//! Complex-network metrics and capacity-based node weights.

mod anc;
mod centrality;
mod percolation;
mod summary;
mod topology;
mod weights;

use thiserror::Error;

use crate::network::NodeId;

pub use anc::{anc_from, anc_terms, anc_terms_with, AncMode, AncTerm, AncTermTable};
pub use centrality::{
    betweenness, betweenness_of, closeness, closeness_values, clustering, clustering_of, degree_stats, Clustering,
    DegreeStats,
};
pub use percolation::{critical_fraction, molloy_reed, random_removal, CriticalFraction, CriticalFractionMode};
pub use summary::{metric_summary, MetricSummary};
pub use topology::{shortest_paths, DistanceMatrix, Topology};
pub use weights::{
    demand_adjusted, demand_adjusted_degree, entropic_degree, entropy_factor, link_capacity, pipe_capacity,
    EntropicDegree, LogBase, NodeWeight, NodeWeightTable,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),
    #[error("node {0} is isolated")]
    IsolatedNode(NodeId),
    #[error("link {0} is not a pipe with length and diameter")]
    NotAPipe(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
