//! Capacity-based node weights.
//!
//! Each pipe carries the capacity w = π·L·D²/4 in the input's own units
//! (feet × inches²). A node's incident capacities are normalised to
//! p_ik = w_ik / Σ_k w_ik and combined into the entropic degree
//! g_i = (1 − Σ_k p_ik·log p_ik)·Σ_k w_ik, which is then scaled by the
//! node's relative base demand: f_i = (g_i/2)(1 + d_i/M_d).
//!
//! Pumps and valves have no capacity and are left out of the sums. Parallel
//! pipes between the same pair of nodes add up into one w_ik.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::MetricsError;
use crate::network::{Link, LinkKind, Network, NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

pub fn link_capacity(link: &Link) -> Result<f64, MetricsError> {
    match (link.kind, link.length, link.diameter) {
        (LinkKind::Pipe, Some(l), Some(d)) => Ok(pipe_capacity(l, d)),
        _ => Err(MetricsError::NotAPipe(link.id.clone())),
    }
}

/// π·L·D²/4 without unit conversion.
pub fn pipe_capacity(length: f64, diameter: f64) -> f64 {
    PI * length * diameter * diameter / 4.0
}

/// 1 − Σ p·log p over the normalised shares of `capacities`, with 0·log 0 = 0.
pub fn entropy_factor(capacities: &[f64], base: LogBase) -> f64 {
    let total: f64 = capacities.iter().sum();
    let h: f64 = capacities
        .iter()
        .map(|&w| w / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * base.log(p))
        .sum();
    1.0 + h
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropicDegree {
    /// Σ_k w_ik
    pub capacity: f64,
    /// p_ik per neighbour, in neighbour index order.
    pub shares: Vec<(usize, f64)>,
    pub g: f64,
    /// No incident pipe: g is 0.
    pub zero_capacity: bool,
}

/// Capacity between `node` and each pipe neighbour, parallel pipes summed.
fn neighbour_capacities(net: &Network, node: usize, incidence: &[usize]) -> BTreeMap<usize, f64> {
    let mut by_neighbour = BTreeMap::new();
    for &l in incidence {
        let link = &net.links()[l];
        if let Ok(w) = link_capacity(link) {
            let (a, b) = net.endpoints(l);
            let other = if a == node { b } else { a };
            *by_neighbour.entry(other).or_insert(0.0) += w;
        }
    }
    by_neighbour
}

fn entropic_at(net: &Network, node: usize, incidence: &[usize], base: LogBase) -> EntropicDegree {
    let caps = neighbour_capacities(net, node, incidence);
    let capacity: f64 = caps.values().sum();
    if caps.is_empty() || capacity <= 0.0 {
        return EntropicDegree {
            capacity: 0.0,
            shares: Vec::new(),
            g: 0.0,
            zero_capacity: true,
        };
    }
    let values: Vec<f64> = caps.values().copied().collect();
    EntropicDegree {
        capacity,
        shares: caps.iter().map(|(&k, &w)| (k, w / capacity)).collect(),
        g: entropy_factor(&values, base) * capacity,
        zero_capacity: false,
    }
}

pub fn entropic_degree(net: &Network, node: &NodeId, base: LogBase) -> Result<EntropicDegree, MetricsError> {
    let i = net
        .node_index(node)
        .ok_or_else(|| MetricsError::UnknownNode(node.clone()))?;
    let incidence = &net.incidence()[i];
    Ok(entropic_at(net, i, incidence, base))
}

/// f = (g/2)(1 + d/M_d).
pub fn demand_adjusted_degree(g: f64, demand: f64, max_demand: f64) -> f64 {
    g / 2.0 * (1.0 + demand / max_demand)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeight {
    pub id: NodeId,
    pub kind: NodeKind,
    pub demand: f64,
    pub w_sum: f64,
    pub g: f64,
    pub f: f64,
    pub f_norm: f64,
    pub zero_capacity: bool,
}

impl NodeWeight {
    /// Tanks and reservoirs get f = 1 and f_norm = 0 by convention rather
    /// than by formula.
    pub fn is_storage_convention(&self) -> bool {
        self.kind != NodeKind::Junction
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeightTable {
    pub rows: Vec<NodeWeight>,
    /// M_d: largest junction base demand.
    pub max_demand: f64,
    /// Σ f over junctions.
    pub junction_f_sum: f64,
    pub log_base: LogBase,
    /// No junction has positive demand; f = g/2 was used throughout.
    pub no_positive_demand: bool,
}

impl NodeWeightTable {
    pub fn f_norm(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.f_norm).collect()
    }
}

pub fn demand_adjusted(net: &Network, base: LogBase) -> NodeWeightTable {
    let incidence = net.incidence();
    let max_demand = net
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Junction)
        .map(|n| n.base_demand)
        .fold(0.0, f64::max);
    let no_positive_demand = max_demand <= 0.0;

    let mut rows: Vec<NodeWeight> = net
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let ed = entropic_at(net, i, &incidence[i], base);
            let f = match node.kind {
                NodeKind::Junction if no_positive_demand => ed.g / 2.0,
                NodeKind::Junction => demand_adjusted_degree(ed.g, node.base_demand, max_demand),
                NodeKind::Tank | NodeKind::Reservoir => 1.0,
            };
            NodeWeight {
                id: node.id.clone(),
                kind: node.kind,
                demand: node.base_demand,
                w_sum: ed.capacity,
                g: ed.g,
                f,
                f_norm: 0.0,
                zero_capacity: ed.zero_capacity,
            }
        })
        .collect();

    let junction_f_sum: f64 = rows.iter().filter(|r| r.kind == NodeKind::Junction).map(|r| r.f).sum();
    if junction_f_sum > 0.0 {
        for r in rows.iter_mut().filter(|r| r.kind == NodeKind::Junction) {
            r.f_norm = r.f / junction_f_sum;
        }
    }

    NodeWeightTable {
        rows,
        max_demand,
        junction_f_sum,
        log_base: base,
        no_positive_demand,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Link, Node};

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn capacity_values() {
        let link8 = Link::pipe("LINK-8", "6", "7", 502.0, 8.0);
        let w = link_capacity(&link8).unwrap();
        assert!(close(w, 25_233.27, 5e-4), "{w}");
        assert_eq!(link_capacity(&Link::pipe("p", "a", "b", 1.0, 2.0)).unwrap(), PI);
        let link19 = Link::pipe("LINK-19", "RESERVOIR-129", "128", 51.0, 30.0);
        assert!(close(link_capacity(&link19).unwrap(), 36_049.78, 5e-4));
        assert!(matches!(link_capacity(&Link::pump("PUMP-170", "105", "106")), Err(MetricsError::NotAPipe(_))));
        assert!(link_capacity(&Link::valve("VALVE-173", "111", "112", Some(6.0))).is_err());
    }

    fn star_net(caps: &[(f64, f64)]) -> Network {
        let mut nodes = vec![Node::junction("c", 1.0)];
        let mut links = Vec::new();
        for (k, &(l, d)) in caps.iter().enumerate() {
            nodes.push(Node::junction(format!("x{k}"), 0.0));
            links.push(Link::pipe(format!("p{k}"), "c", &format!("x{k}"), l, d));
        }
        Network::new("s", nodes, links).unwrap()
    }

    #[test]
    fn degree_one_is_base_independent() {
        let net = star_net(&[(502.0, 8.0)]);
        for base in [LogBase::Natural, LogBase::Two] {
            let ed = entropic_degree(&net, &"c".into(), base).unwrap();
            assert_eq!(ed.g, ed.capacity);
            assert!(close(ed.g, 25_233.27, 5e-4));
        }
    }

    #[test]
    fn symmetric_split() {
        let net = star_net(&[(1.0, 2.0), (1.0, 2.0)]);
        let ed = entropic_degree(&net, &"c".into(), LogBase::Natural).unwrap();
        let w = PI;
        assert!((ed.g - (1.0 + 2f64.ln()) * 2.0 * w).abs() < 1e-12);
        let ed2 = entropic_degree(&net, &"c".into(), LogBase::Two).unwrap();
        assert!((ed2.g - 2.0 * 2.0 * w).abs() < 1e-12);
    }

    #[test]
    fn three_to_one_split() {
        // capacities 3π and π: L=3,D=2 and L=1,D=2
        let net = star_net(&[(3.0, 2.0), (1.0, 2.0)]);
        let ed = entropic_degree(&net, &"c".into(), LogBase::Natural).unwrap();
        let shares: Vec<f64> = ed.shares.iter().map(|s| s.1).collect();
        assert_eq!(shares, vec![0.75, 0.25]);
        let h = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((h - 0.562_335_144_618_808_6).abs() < 1e-15);
        assert!((ed.g - (1.0 + h) * 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn parallel_pipes_merge() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 0.0)];
        let links = vec![Link::pipe("p1", "a", "b", 1.0, 2.0), Link::pipe("p2", "b", "a", 1.0, 2.0)];
        let net = Network::new("m", nodes, links).unwrap();
        let ed = entropic_degree(&net, &"a".into(), LogBase::Natural).unwrap();
        assert_eq!(ed.g, 2.0 * PI);
    }

    #[test]
    fn zero_capacity_node() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 1.0)];
        let net = Network::new("z", nodes, vec![Link::pump("pu", "a", "b")]).unwrap();
        let ed = entropic_degree(&net, &"a".into(), LogBase::Natural).unwrap();
        assert!(ed.zero_capacity);
        assert_eq!(ed.g, 0.0);
        assert!(matches!(
            entropic_degree(&net, &"q".into(), LogBase::Natural),
            Err(MetricsError::UnknownNode(_))
        ));
    }

    #[test]
    fn worked_demand_example() {
        let f = demand_adjusted_degree(153_730.59, 0.763534, 197.663527);
        assert!((f - 77_162.21).abs() < 0.5, "{f}");
        assert!((f / 5_020_313.0 - 0.01537).abs() < 1e-5);
        assert!((demand_adjusted_degree(25_233.27, 0.0, 197.663527) - 12_616.635).abs() < 1e-9);
    }

    #[test]
    fn table_conventions() {
        let nodes = vec![
            Node::reservoir("R"),
            Node::junction("a", 2.0),
            Node::junction("b", 0.0),
            Node::tank("T"),
        ];
        let links = vec![
            Link::pipe("p0", "R", "a", 51.0, 30.0),
            Link::pipe("p1", "a", "b", 502.0, 8.0),
            Link::pipe("p2", "b", "T", 242.0, 24.0),
        ];
        let net = Network::new("t", nodes, links).unwrap();
        let table = demand_adjusted(&net, LogBase::Natural);
        assert_eq!(table.max_demand, 2.0);
        let r = &table.rows[0];
        assert_eq!((r.f, r.f_norm), (1.0, 0.0));
        assert!(r.is_storage_convention());
        assert!(close(r.g, 36_049.78, 5e-4));
        let b = &table.rows[2];
        assert_eq!(b.f, b.g / 2.0);
        let a = &table.rows[1];
        assert_eq!(a.f, a.g);
        let sum: f64 = table.rows.iter().map(|r| r.f_norm).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(!table.no_positive_demand);
    }

    #[test]
    fn no_demand_flag() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 0.0)];
        let net = Network::new("z", nodes, vec![Link::pipe("p", "a", "b", 1.0, 2.0)]).unwrap();
        let table = demand_adjusted(&net, LogBase::Natural);
        assert!(table.no_positive_demand);
        assert_eq!(table.rows[0].f, PI / 2.0);
        assert_eq!(table.rows[0].f_norm, 0.5);
    }
}
