use std::collections::VecDeque;

use crate::network::Network;

/// Undirected simple projection of a network: parallel links collapsed,
/// self-loops dropped, flow direction ignored. Neighbour lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    adj: Vec<Vec<usize>>,
}

impl Topology {
    pub fn from_network(net: &Network) -> Self {
        let edges: Vec<(usize, usize)> = (0..net.link_count()).map(|l| net.endpoints(l)).collect();
        Self::from_edges(net.node_count(), &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Topology { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Hop distances from `source`; `None` where unreachable.
    pub fn bfs(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.adj.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].unwrap() + 1;
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Component label per node, labels numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.adj.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// All-pairs hop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn from_topology(topo: &Topology) -> Self {
        let n = topo.node_count();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(topo.bfs(s).into_iter().map(|x| x.unwrap_or(Self::UNREACHABLE)));
        }
        DistanceMatrix { n, d }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        let v = self.d[i * self.n + j];
        (v != Self::UNREACHABLE).then_some(v)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn is_connected(&self) -> bool {
        self.d.iter().all(|&v| v != Self::UNREACHABLE)
    }

    /// Mean of d_ij over ordered reachable pairs i ≠ j; 0 when there are none.
    pub fn mean_path_length(&self) -> f64 {
        let mut sum = 0u64;
        let mut pairs = 0u64;
        for i in 0..self.n {
            for (j, &v) in self.row(i).iter().enumerate() {
                if i != j && v != Self::UNREACHABLE {
                    sum += u64::from(v);
                    pairs += 1;
                }
            }
        }
        if pairs == 0 {
            0.0
        } else {
            sum as f64 / pairs as f64
        }
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().filter(|&v| v != Self::UNREACHABLE).max().unwrap_or(0)
    }

    /// Largest finite distance from `i`.
    pub fn eccentricity(&self, i: usize) -> u32 {
        self.row(i).iter().copied().filter(|&v| v != Self::UNREACHABLE).max().unwrap_or(0)
    }
}

pub fn shortest_paths(net: &Network) -> DistanceMatrix {
    DistanceMatrix::from_topology(&Topology::from_network(net))
}
