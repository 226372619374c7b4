use std::collections::{BTreeMap, HashMap};

use super::{LinkKind, Network, NodeId};

/// Links sharing the same unordered endpoint pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelLinks {
    pub a: NodeId,
    pub b: NodeId,
    pub links: Vec<String>,
}

/// Structural summary of a network. Building it never mutates the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub node_count: usize,
    /// All links: pipes, pumps and valves.
    pub link_count: usize,
    pub pipe_count: usize,
    pub pump_count: usize,
    pub valve_count: usize,
    pub connected: bool,
    /// Component sizes in order of each component's first node.
    pub component_sizes: Vec<usize>,
    pub isolated: Vec<NodeId>,
    pub self_loops: Vec<String>,
    pub parallel: Vec<ParallelLinks>,
    /// degree -> number of nodes, using multigraph degree.
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl ValidationReport {
    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }
}

pub fn validate(net: &Network) -> ValidationReport {
    let n = net.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut degree = vec![0usize; n];
    let mut self_loops = Vec::new();
    let mut pairs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (l, link) in net.links().iter().enumerate() {
        let (a, b) = net.endpoints(l);
        degree[a] += 1;
        degree[b] += 1;
        if a == b {
            self_loops.push(link.id.clone());
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
        pairs.entry((a.min(b), a.max(b))).or_default().push(l);
    }

    let mut root_order: Vec<usize> = Vec::new();
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let count = sizes.entry(r).or_insert(0);
        if *count == 0 {
            root_order.push(r);
        }
        *count += 1;
    }
    let component_sizes: Vec<usize> = root_order.iter().map(|r| sizes[r]).collect();

    let mut parallel: Vec<ParallelLinks> = pairs
        .into_iter()
        .filter(|(_, ls)| ls.len() > 1)
        .map(|((a, b), ls)| ParallelLinks {
            a: net.nodes()[a].id.clone(),
            b: net.nodes()[b].id.clone(),
            links: ls.iter().map(|&l| net.links()[l].id.clone()).collect(),
        })
        .collect();
    parallel.sort_by(|x, y| x.links.cmp(&y.links));

    let mut degree_histogram = BTreeMap::new();
    for &d in &degree {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }

    let count = |k: LinkKind| net.links().iter().filter(|l| l.kind == k).count();
    ValidationReport {
        node_count: n,
        link_count: net.link_count(),
        pipe_count: count(LinkKind::Pipe),
        pump_count: count(LinkKind::Pump),
        valve_count: count(LinkKind::Valve),
        connected: component_sizes.len() <= 1,
        component_sizes,
        isolated: (0..n)
            .filter(|&v| degree[v] == 0)
            .map(|v| net.nodes()[v].id.clone())
            .collect(),
        self_loops,
        parallel,
        degree_histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{fixtures, Link, Node};

    #[test]
    fn triangle_is_connected() {
        let r = validate(&fixtures::triangle());
        assert!(r.connected);
        assert!(r.isolated.is_empty());
        assert_eq!(r.component_count(), 1);
    }

    #[test]
    fn disjoint_edges() {
        let r = validate(&fixtures::from_edges("two", 4, &[(0, 1), (2, 3)]));
        assert!(!r.connected);
        assert_eq!(r.component_sizes, vec![2, 2]);
    }

    #[test]
    fn star_histogram() {
        let r = validate(&fixtures::star(3));
        assert_eq!(r.degree_histogram, BTreeMap::from([(1, 3), (3, 1)]));
    }

    #[test]
    fn isolated_parallel_and_counts() {
        let nodes = vec![
            Node::junction("a", 0.0),
            Node::junction("b", 0.0),
            Node::reservoir("r"),
            Node::junction("lonely", 0.0),
        ];
        let links = vec![
            Link::pipe("p1", "a", "b", 1.0, 1.0),
            Link::pipe("p2", "b", "a", 1.0, 1.0),
            Link::pump("pu", "r", "a"),
            Link::valve("v", "r", "b", None),
        ];
        let net = Network::new("x", nodes, links).unwrap();
        let before = net.clone();
        let r = validate(&net);
        assert_eq!(net, before);
        assert_eq!(r.isolated, vec![NodeId::from("lonely")]);
        assert_eq!(r.parallel.len(), 1);
        assert_eq!(r.parallel[0].links, vec!["p1".to_string(), "p2".to_string()]);
        assert_eq!((r.link_count, r.pipe_count, r.pump_count, r.valve_count), (4, 2, 1, 1));
        assert_eq!(r.component_sizes, vec![3, 1]);
    }
}
