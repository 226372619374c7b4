//! The relation covers(i, j, s): a sensor at j sees an injection at i under
//! scenario s within the coverage time T.
//!
//! Stored sensor-major: for every candidate sensor j one bit row over the
//! (scenario, source) pairs, pair index `s * N + i`. This is the layout the
//! optimizer wants, since a placement's coverage is the union of its rows.

use std::fmt::Write;

use super::transport::{flow_digraph, travel_times_on, TransportOptions};
use super::{ScenarioError, ScenarioSet};
use crate::network::{HydraulicSeries, Network, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageRelation {
    node_ids: Vec<NodeId>,
    scenario_count: usize,
    coverage_time_s: u64,
    words: usize,
    bits: Vec<u64>,
}

impl CoverageRelation {
    /// All-false relation.
    pub fn empty(node_ids: Vec<NodeId>, scenario_count: usize, coverage_time_s: u64) -> Self {
        let pairs = node_ids.len() * scenario_count;
        let words = pairs.div_ceil(64);
        CoverageRelation {
            bits: vec![0; words * node_ids.len()],
            node_ids,
            scenario_count,
            coverage_time_s,
            words,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.node_ids
    }

    pub fn scenario_count(&self) -> usize {
        self.scenario_count
    }

    pub fn coverage_time_s(&self) -> u64 {
        self.coverage_time_s
    }

    /// Number of (source, scenario) pairs.
    pub fn pair_count(&self) -> usize {
        self.node_ids.len() * self.scenario_count
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    fn pair(&self, source: usize, scenario: usize) -> usize {
        scenario * self.node_ids.len() + source
    }

    pub fn covers(&self, source: usize, sensor: usize, scenario: usize) -> bool {
        let p = self.pair(source, scenario);
        self.bits[sensor * self.words + p / 64] >> (p % 64) & 1 == 1
    }

    pub fn set(&mut self, source: usize, sensor: usize, scenario: usize) {
        let p = self.pair(source, scenario);
        self.bits[sensor * self.words + p / 64] |= 1 << (p % 64);
    }

    /// Bit row of pairs covered by a sensor at `sensor`.
    pub fn sensor_row(&self, sensor: usize) -> &[u64] {
        &self.bits[sensor * self.words..(sensor + 1) * self.words]
    }

    pub fn true_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Every (source, sensor, scenario) triple that holds, in scenario,
    /// source, sensor order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.node_count();
        let mut out = Vec::with_capacity(self.true_count());
        for s in 0..self.scenario_count {
            for i in 0..n {
                for j in 0..n {
                    if self.covers(i, j, s) {
                        out.push((i, j, s));
                    }
                }
            }
        }
        out
    }

    /// True if every triple of `self` also holds in `other`.
    pub fn is_subset_of(&self, other: &CoverageRelation) -> bool {
        self.bits.len() == other.bits.len() && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

pub fn coverage_relation(
    net: &Network,
    series: &HydraulicSeries,
    set: &ScenarioSet,
    opts: TransportOptions,
) -> Result<CoverageRelation, ScenarioError> {
    let n = net.node_count();
    let limit = set.coverage_time_s as f64;
    let ids = net.nodes().iter().map(|node| node.id.clone()).collect();
    let mut rel = CoverageRelation::empty(ids, set.len(), set.coverage_time_s);

    // Scenarios sharing a snapshot share travel times; compute each snapshot once.
    let mut cached: Option<(usize, Vec<Vec<bool>>)> = None;
    for scenario in &set.scenarios {
        let snap_idx = series.index_at(scenario.start_s).ok_or(ScenarioError::NoSnapshotBefore {
            index: scenario.index,
            start_s: scenario.start_s,
        })?;
        if cached.as_ref().map(|c| c.0) != Some(snap_idx) {
            let graph = flow_digraph(net, &series.snapshots()[snap_idx], opts)?;
            let reach = (0..n)
                .map(|i| travel_times_on(&graph, i).times.iter().map(|&t| t <= limit).collect())
                .collect();
            cached = Some((snap_idx, reach));
        }
        let reach = &cached.as_ref().unwrap().1;
        for (i, row) in reach.iter().enumerate() {
            for (j, &hit) in row.iter().enumerate() {
                if hit {
                    rel.set(i, j, scenario.index);
                }
            }
        }
    }
    Ok(rel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageStats {
    /// Per candidate sensor: number of (source, scenario) pairs it covers.
    pub pairs_per_sensor: Vec<usize>,
    /// Per scenario: number of sources some sensor can detect.
    pub coverable_sources: Vec<usize>,
    /// Per scenario: number of true (source, sensor) entries.
    pub entries_per_scenario: Vec<usize>,
}

pub fn coverage_stats(rel: &CoverageRelation) -> CoverageStats {
    let n = rel.node_count();
    let s_count = rel.scenario_count();
    let pairs_per_sensor = (0..n)
        .map(|j| rel.sensor_row(j).iter().map(|w| w.count_ones() as usize).sum())
        .collect();
    let mut coverable_sources = vec![0; s_count];
    let mut entries_per_scenario = vec![0; s_count];
    for s in 0..s_count {
        for i in 0..n {
            let hits = (0..n).filter(|&j| rel.covers(i, j, s)).count();
            entries_per_scenario[s] += hits;
            if hits > 0 {
                coverable_sources[s] += 1;
            }
        }
    }
    CoverageStats {
        pairs_per_sensor,
        coverable_sources,
        entries_per_scenario,
    }
}

const HEADER: &str = "wdn-coverage v1";

/// Sparse text form:
///
/// ```text
/// wdn-coverage v1 N=<n> S=<s> T=<seconds>
/// nodes <id> <id> ...
/// <i> <j> <s>
/// ...
/// ```
pub fn serialize_coverage(rel: &CoverageRelation) -> String {
    let mut out = format!(
        "{HEADER} N={} S={} T={}\nnodes",
        rel.node_count(),
        rel.scenario_count(),
        rel.coverage_time_s()
    );
    for id in rel.node_ids() {
        write!(out, " {id}").unwrap();
    }
    out.push('\n');
    for (i, j, s) in rel.triples() {
        writeln!(out, "{i} {j} {s}").unwrap();
    }
    out
}

pub fn parse_coverage(text: &str) -> Result<CoverageRelation, ScenarioError> {
    let bad = |line: usize, reason: &str| ScenarioError::MalformedCoverage {
        line,
        reason: reason.to_string(),
    };
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty());

    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty document"))?;
    let fields = header
        .strip_prefix(HEADER)
        .ok_or_else(|| bad(1, "missing wdn-coverage v1 header"))?;
    let (mut n, mut s, mut t) = (None, None, None);
    for kv in fields.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad(1, "header fields must be key=value"))?;
        let v: u64 = v.parse().map_err(|_| bad(1, "header value is not an integer"))?;
        match k {
            "N" => n = Some(v as usize),
            "S" => s = Some(v as usize),
            "T" => t = Some(v),
            _ => return Err(bad(1, "unknown header field")),
        }
    }
    let (n, s, t) = match (n, s, t) {
        (Some(n), Some(s), Some(t)) => (n, s, t),
        _ => return Err(bad(1, "header needs N, S and T")),
    };

    let (line, nodes) = lines.next().ok_or_else(|| bad(2, "missing nodes line"))?;
    let ids = nodes
        .strip_prefix("nodes")
        .ok_or_else(|| bad(line, "expected nodes line"))?
        .split_whitespace()
        .map(|id| NodeId::new(id).map_err(|e| bad(line, &e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if ids.len() != n {
        return Err(bad(line, "node count disagrees with N"));
    }

    let mut rel = CoverageRelation::empty(ids, s, t);
    for (line, row) in lines {
        let v: Vec<usize> = row
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(line, "triple entries must be integers"))?;
        match v.as_slice() {
            &[i, j, k] if i < n && j < n && k < s => rel.set(i, j, k),
            &[_, _, _] => return Err(bad(line, "triple out of range")),
            _ => return Err(bad(line, "expected `i j s`")),
        }
    }
    Ok(rel)
}
