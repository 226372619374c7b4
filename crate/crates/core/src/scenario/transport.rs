use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::ScenarioError;
use crate::network::{FlowSign, HydraulicSnapshot, LinkKind, Network, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Traversal time assigned to flowing pumps and valves, which have no
    /// length to divide by velocity.
    pub fixed_traversal_s: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions { fixed_traversal_s: 0.0 }
    }
}

/// Directed arcs along the flow direction, weighted by travel time in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowDigraph {
    out: Vec<Vec<(usize, f64)>>,
}

impl FlowDigraph {
    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn arcs(&self, v: usize) -> &[(usize, f64)] {
        &self.out[v]
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}

pub fn flow_digraph(
    net: &Network,
    snap: &HydraulicSnapshot,
    opts: TransportOptions,
) -> Result<FlowDigraph, ScenarioError> {
    if snap.links.len() != net.link_count() {
        return Err(ScenarioError::SnapshotMismatch);
    }
    let mut out = vec![Vec::new(); net.node_count()];
    for (l, (link, state)) in net.links().iter().zip(&snap.links).enumerate() {
        let (a, b) = net.endpoints(l);
        let (from, to) = match state.sign {
            FlowSign::Zero => continue,
            FlowSign::Forward => (a, b),
            FlowSign::Reverse => (b, a),
        };
        let weight = match (link.kind, link.length) {
            (LinkKind::Pipe, Some(len)) => len / state.velocity,
            _ => opts.fixed_traversal_s,
        };
        out[from].push((to, weight));
    }
    Ok(FlowDigraph { out })
}

/// Minimal contaminant arrival time per node, `f64::INFINITY` where unreachable.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelTimeField {
    pub source: usize,
    pub times: Vec<f64>,
}

impl TravelTimeField {
    pub fn get(&self, v: usize) -> Option<f64> {
        let t = self.times[v];
        t.is_finite().then_some(t)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    time: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over a prebuilt flow digraph.
pub fn travel_times_on(graph: &FlowDigraph, source: usize) -> TravelTimeField {
    let mut times = vec![f64::INFINITY; graph.node_count()];
    let mut heap = BinaryHeap::new();
    times[source] = 0.0;
    heap.push(Entry { time: 0.0, node: source });
    while let Some(Entry { time, node }) = heap.pop() {
        if time > times[node] {
            continue;
        }
        for &(next, w) in graph.arcs(node) {
            let t = time + w;
            if t < times[next] {
                times[next] = t;
                heap.push(Entry { time: t, node: next });
            }
        }
    }
    TravelTimeField { source, times }
}

pub fn travel_times(
    net: &Network,
    snap: &HydraulicSnapshot,
    source: &NodeId,
    opts: TransportOptions,
) -> Result<TravelTimeField, ScenarioError> {
    let s = net
        .node_index(source)
        .ok_or_else(|| ScenarioError::UnknownNode(source.clone()))?;
    Ok(travel_times_on(&flow_digraph(net, snap, opts)?, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{LinkState, Node, Link};

    fn fwd(v: f64) -> LinkState {
        LinkState::new(v, FlowSign::Forward).unwrap()
    }

    fn snapshot(states: Vec<LinkState>) -> HydraulicSnapshot {
        HydraulicSnapshot { time_s: 0, links: states }
    }

    #[test]
    fn arc_rules() {
        let nodes = ["a", "b", "c", "d"].iter().map(|id| Node::junction(*id, 0.0)).collect();
        let links = vec![
            Link::pipe("p", "a", "b", 100.0, 8.0),
            Link::pipe("still", "b", "c", 502.0, 8.0),
            Link::pump("pu", "c", "d"),
            Link::pipe("back", "a", "d", 60.0, 8.0),
        ];
        let net = Network::new("n", nodes, links).unwrap();
        let snap = snapshot(vec![
            fwd(1.0),
            LinkState::STILL,
            fwd(3.0),
            LinkState::new(2.0, FlowSign::Reverse).unwrap(),
        ]);
        let g = flow_digraph(&net, &snap, TransportOptions::default()).unwrap();
        assert_eq!(g.arcs(0), &[(1, 100.0)]);
        assert!(g.arcs(1).is_empty());
        assert_eq!(g.arcs(2), &[(3, 0.0)]);
        assert_eq!(g.arcs(3), &[(0, 30.0)]);
        assert_eq!(g.arc_count(), 3);

        let slow = flow_digraph(&net, &snap, TransportOptions { fixed_traversal_s: 7.0 }).unwrap();
        assert_eq!(slow.arcs(2), &[(3, 7.0)]);
        assert_eq!(
            flow_digraph(&net, &snapshot(vec![]), TransportOptions::default()).unwrap_err(),
            ScenarioError::SnapshotMismatch
        );
    }

    #[test]
    fn chain_times() {
        let nodes = ["a", "b", "c"].iter().map(|id| Node::junction(*id, 0.0)).collect();
        let links = vec![Link::pipe("p1", "a", "b", 100.0, 8.0), Link::pipe("p2", "b", "c", 100.0, 8.0)];
        let net = Network::new("chain", nodes, links).unwrap();
        let snap = snapshot(vec![fwd(1.0), fwd(1.0)]);
        let from_a = travel_times(&net, &snap, &"a".into(), TransportOptions::default()).unwrap();
        assert_eq!(from_a.times, vec![0.0, 100.0, 200.0]);
        let from_c = travel_times(&net, &snap, &"c".into(), TransportOptions::default()).unwrap();
        assert_eq!(from_c.get(2), Some(0.0));
        assert_eq!(from_c.get(0), None);
        assert_eq!(from_c.get(1), None);
        assert!(matches!(
            travel_times(&net, &snap, &"z".into(), TransportOptions::default()),
            Err(ScenarioError::UnknownNode(_))
        ));
    }

    #[test]
    fn diamond_takes_faster_branch() {
        // a→b→d = 60+60, a→c→d = 50+80
        let nodes = ["a", "b", "c", "d"].iter().map(|id| Node::junction(*id, 0.0)).collect();
        let links = vec![
            Link::pipe("ab", "a", "b", 60.0, 8.0),
            Link::pipe("bd", "b", "d", 60.0, 8.0),
            Link::pipe("ac", "a", "c", 50.0, 8.0),
            Link::pipe("cd", "c", "d", 80.0, 8.0),
        ];
        let net = Network::new("diamond", nodes, links).unwrap();
        let snap = snapshot(vec![fwd(1.0); 4]);
        let tt = travel_times(&net, &snap, &"a".into(), TransportOptions::default()).unwrap();
        assert_eq!(tt.times[3], 120.0);
    }
}
