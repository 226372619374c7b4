//! Contamination scenarios, flow-directed transport and the detection
//! coverage relation.
//!
//! A scenario injects contaminant at every node simultaneously at a given
//! start time. Transport is quasi-static: the hydraulic snapshot in force at
//! the scenario start is used for the whole propagation.

mod coverage;
mod transport;

use thiserror::Error;

use crate::network::NodeId;

pub use coverage::{coverage_relation, coverage_stats, parse_coverage, serialize_coverage, CoverageRelation, CoverageStats};
pub use transport::{flow_digraph, travel_times, travel_times_on, FlowDigraph, TransportOptions, TravelTimeField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("horizon {horizon_s} s is not a multiple of the interval {interval_s} s")]
    NonDivisibleHorizon { horizon_s: u64, interval_s: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("scenario {index} starts at t={start_s} s, before the first hydraulic snapshot")]
    NoSnapshotBefore { index: usize, start_s: u64 },
    #[error("hydraulic snapshot does not match the network's links")]
    SnapshotMismatch,
    #[error("malformed coverage file at line {line}: {reason}")]
    MalformedCoverage { line: usize, reason: String },
}

pub const DEFAULT_HORIZON_S: u64 = 24 * 3600;
pub const DEFAULT_INTERVAL_S: u64 = 5 * 60;
pub const DEFAULT_DURATION_S: u64 = 2 * 3600;
pub const DEFAULT_COVERAGE_TIME_S: u64 = 2 * 3600;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scenario {
    pub index: usize,
    pub start_s: u64,
    /// Injection duration. Carried for reporting; detection depends only on
    /// travel time against the coverage time.
    pub duration_s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
    pub horizon_s: u64,
    pub interval_s: u64,
    /// T: longest acceptable delay between injection and detection.
    pub coverage_time_s: u64,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// One injection per node per scenario.
    pub fn event_count(&self, node_count: usize) -> usize {
        self.scenarios.len() * node_count
    }
}

pub fn generate_scenarios(
    horizon_s: u64,
    interval_s: u64,
    duration_s: u64,
    coverage_time_s: u64,
) -> Result<ScenarioSet, ScenarioError> {
    if horizon_s == 0 || interval_s == 0 || duration_s == 0 || coverage_time_s == 0 {
        return Err(ScenarioError::InvalidArgument(
            "horizon, interval, duration and coverage time must be positive".into(),
        ));
    }
    if horizon_s % interval_s != 0 {
        return Err(ScenarioError::NonDivisibleHorizon { horizon_s, interval_s });
    }
    if coverage_time_s > duration_s {
        return Err(ScenarioError::InvalidArgument(format!(
            "coverage time {coverage_time_s} s exceeds the longest injection duration {duration_s} s"
        )));
    }
    let count = (horizon_s / interval_s) as usize;
    Ok(ScenarioSet {
        scenarios: (0..count)
            .map(|k| Scenario {
                index: k,
                start_s: k as u64 * interval_s,
                duration_s,
            })
            .collect(),
        horizon_s,
        interval_s,
        coverage_time_s,
    })
}
