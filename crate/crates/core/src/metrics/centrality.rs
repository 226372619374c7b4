//! Degree, clustering, betweenness and closeness.
//!
//! Everything except degree works on the undirected simple projection.
//! Per-node results are `Vec`s indexed like `Network::nodes`.

use std::collections::VecDeque;

use super::topology::Topology;
use super::MetricsError;
use crate::network::Network;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub k_max: usize,
    pub mean_degree: f64,
    /// Multigraph degree: every incident link counts.
    pub per_node: Vec<usize>,
}

pub fn degree_stats(net: &Network) -> DegreeStats {
    let per_node: Vec<usize> = net.incidence().iter().map(Vec::len).collect();
    let n = per_node.len();
    DegreeStats {
        k_max: per_node.iter().copied().max().unwrap_or(0),
        mean_degree: if n == 0 { 0.0 } else { per_node.iter().sum::<usize>() as f64 / n as f64 },
        per_node,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub per_node: Vec<f64>,
    pub average: f64,
}

pub fn clustering(net: &Network) -> Clustering {
    clustering_of(&Topology::from_network(net))
}

pub fn clustering_of(topo: &Topology) -> Clustering {
    let n = topo.node_count();
    let per_node: Vec<f64> = (0..n)
        .map(|v| {
            let nb = topo.neighbors(v);
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (x, &a) in nb.iter().enumerate() {
                links += nb[x + 1..].iter().filter(|&&b| topo.has_edge(a, b)).count();
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        })
        .collect();
    let average = if n == 0 { 0.0 } else { per_node.iter().sum::<f64>() / n as f64 };
    Clustering { per_node, average }
}

pub fn betweenness(net: &Network) -> Result<Vec<f64>, MetricsError> {
    betweenness_of(&Topology::from_network(net))
}

/// Shortest-path betweenness normalised by (N−1)(N−2) over ordered pairs,
/// accumulated with Brandes' dependency recursion.
pub fn betweenness_of(topo: &Topology) -> Result<Vec<f64>, MetricsError> {
    let n = topo.node_count();
    if n < 3 {
        return Err(MetricsError::DegenerateGraph(format!(
            "betweenness needs at least 3 nodes, got {n}"
        )));
    }
    let mut total = vec![0.0f64; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![u32::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(u32::MAX);
        delta.fill(0.0);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in topo.neighbors(v) {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in topo.neighbors(w) {
                if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                total[w] += delta[w];
            }
        }
    }

    let norm = ((n - 1) * (n - 2)) as f64;
    Ok(total.into_iter().map(|b| b / norm).collect())
}

/// Closeness per node within its own component; `None` for isolated nodes.
pub fn closeness_values(topo: &Topology) -> Vec<Option<f64>> {
    (0..topo.node_count())
        .map(|v| {
            let (reach, sum) = topo
                .bfs(v)
                .into_iter()
                .flatten()
                .fold((0usize, 0u64), |(c, s), d| (c + 1, s + u64::from(d)));
            (reach > 1).then(|| (reach - 1) as f64 / sum as f64)
        })
        .collect()
}

/// cl_i = (n_c − 1) / Σ_j d_ij where n_c is the size of i's component.
pub fn closeness(net: &Network) -> Result<Vec<f64>, MetricsError> {
    closeness_values(&Topology::from_network(net))
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| MetricsError::IsolatedNode(net.nodes()[v].id.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures;

    #[test]
    fn degrees() {
        let tri = degree_stats(&fixtures::triangle());
        assert_eq!((tri.k_max, tri.mean_degree), (2, 2.0));
        let star = degree_stats(&fixtures::star(3));
        assert_eq!((star.k_max, star.mean_degree), (3, 1.5));
        let multi = degree_stats(&fixtures::from_edges("m", 2, &[(0, 1), (0, 1)]));
        assert_eq!(multi.per_node, vec![2, 2]);
    }

    #[test]
    fn clustering_fixtures() {
        let tri = clustering(&fixtures::triangle());
        assert_eq!(tri.per_node, vec![1.0; 3]);
        assert_eq!(tri.average, 1.0);
        assert_eq!(clustering(&fixtures::star(3)).average, 0.0);

        // triangle N0 N1 N2 with pendant N3 on N0
        let c = clustering(&fixtures::from_edges("tp", 4, &[(0, 1), (1, 2), (2, 0), (0, 3)]));
        assert_eq!(c.per_node, vec![1.0 / 3.0, 1.0, 1.0, 0.0]);
        assert!((c.average - 7.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn betweenness_fixtures() {
        assert_eq!(betweenness(&fixtures::path(3)).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(betweenness(&fixtures::star(3)).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        // 4-cycle: each node is on one of the two geodesics of its opposite
        // pair, in both directions: 2 * 1/2 / 6.
        for b in betweenness(&fixtures::cycle(4)).unwrap() {
            assert!((b - 1.0 / 6.0).abs() < 1e-15);
        }
        assert!(matches!(
            betweenness(&fixtures::path(2)),
            Err(MetricsError::DegenerateGraph(_))
        ));
    }

    #[test]
    fn closeness_fixtures() {
        assert_eq!(closeness(&fixtures::star(3)).unwrap(), vec![1.0, 0.6, 0.6, 0.6]);
        assert_eq!(closeness(&fixtures::path(3)).unwrap(), vec![2.0 / 3.0, 1.0, 2.0 / 3.0]);
        assert_eq!(closeness(&fixtures::cycle(5)).unwrap(), vec![4.0 / 6.0; 5]);
        let iso = fixtures::from_edges("iso", 3, &[(0, 1)]);
        assert!(matches!(closeness(&iso), Err(MetricsError::IsolatedNode(id)) if id.as_str() == "N2"));
    }

    #[test]
    fn closeness_uses_component_size() {
        let topo = Topology::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
        let cl = closeness_values(&topo);
        assert_eq!(cl[1], Some(1.0));
        assert_eq!(cl[3], Some(1.0));
    }
}
