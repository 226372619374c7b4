mod common;

use proptest::prelude::*;
use wdn_core::metrics::{
    anc_terms, betweenness, closeness_values, clustering, degree_stats, demand_adjusted, entropic_degree,
    metric_summary, shortest_paths, CriticalFractionMode, LogBase, Topology,
};
use wdn_core::network::{Link, Network};

const UNREACH: u64 = u64::MAX;

/// Floyd–Warshall distances and shortest-path counts on the simple graph.
fn floyd(n: usize, edges: &[(usize, usize)]) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut d = vec![vec![UNREACH; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != UNREACH && d[k][j] != UNREACH && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    // sigma(s,t) by increasing distance: sum over neighbours v of t one step closer
    let mut sigma = vec![vec![0u64; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t] != UNREACH).collect();
        order.sort_by_key(|&t| d[s][t]);
        for t in order {
            sigma[s][t] = if t == s {
                1
            } else {
                (0..n).filter(|&v| adj[v][t] && d[s][v] + 1 == d[s][t]).map(|v| sigma[s][v]).sum()
            };
        }
    }
    (d, sigma)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn centrality_matches_floyd((n, edges) in common::edges(9, 20)) {
        let net = common::network(n, &edges);
        let (d, sigma) = floyd(n, &edges);
        let dm = shortest_paths(&net);
        for i in 0..n {
            for j in 0..n {
                let expect = (d[i][j] != UNREACH).then(|| d[i][j] as u32);
                prop_assert_eq!(dm.get(i, j), expect);
            }
        }

        if n >= 3 {
            let b = betweenness(&net).unwrap();
            for v in 0..n {
                let mut total = 0.0;
                for s in 0..n {
                    for t in 0..n {
                        if s == t || s == v || t == v || d[s][t] == UNREACH {
                            continue;
                        }
                        if d[s][v] != UNREACH && d[v][t] != UNREACH && d[s][v] + d[v][t] == d[s][t] {
                            total += (sigma[s][v] * sigma[v][t]) as f64 / sigma[s][t] as f64;
                        }
                    }
                }
                let expected = total / ((n - 1) * (n - 2)) as f64;
                prop_assert!((b[v] - expected).abs() < 1e-12, "node {}: {} vs {}", v, b[v], expected);
            }
        }

        let cl = closeness_values(&Topology::from_network(&net));
        for v in 0..n {
            let reach: Vec<u64> = (0..n).filter(|&u| u != v && d[v][u] != UNREACH).map(|u| d[v][u]).collect();
            match cl[v] {
                None => prop_assert!(reach.is_empty()),
                Some(c) => {
                    let expected = reach.len() as f64 / reach.iter().sum::<u64>() as f64;
                    prop_assert!((c - expected).abs() < 1e-12);
                }
            }
        }

        let c = clustering(&net);
        for v in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&u| d[v][u] == 1).collect();
            let k = nb.len();
            let links = nb.iter().enumerate().flat_map(|(x, &a)| nb[x + 1..].iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| d[a][b] == 1).count();
            let expected = if k < 2 { 0.0 } else { 2.0 * links as f64 / (k * (k - 1)) as f64 };
            prop_assert!((c.per_node[v] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn relabelling_preserves_metrics((n, edges) in common::edges(9, 16), seed in any::<u64>()) {
        let net = common::network(n, &edges);
        let mut order: Vec<usize> = (0..n).collect();
        // Fisher–Yates with a tiny LCG keeps the test free of extra strategies
        let mut x = seed | 1;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (x >> 33) as usize % (i + 1));
        }
        let perm = net.permuted(&order).unwrap();
        let a = metric_summary(&net, CriticalFractionMode::Analytic).unwrap();
        let b = metric_summary(&perm, CriticalFractionMode::Analytic).unwrap();
        prop_assert_eq!(a.k_max, b.k_max);
        prop_assert_eq!(a.diameter, b.diameter);
        prop_assert_eq!(a.mean_degree, b.mean_degree);
        prop_assert!((a.mean_path_length - b.mean_path_length).abs() < 1e-12);
        prop_assert!((a.clustering_avg - b.clustering_avg).abs() < 1e-12);
        prop_assert!((a.betweenness_mean - b.betweenness_mean).abs() < 1e-12);
        prop_assert_eq!(a.critical_fraction, b.critical_fraction);

        let wa = demand_adjusted(&net, LogBase::Natural);
        let wb = demand_adjusted(&perm, LogBase::Natural);
        for (k, &old) in order.iter().enumerate() {
            prop_assert_eq!(&wa.rows[old].id, &wb.rows[k].id);
            prop_assert!((wa.rows[old].f_norm - wb.rows[k].f_norm).abs() < 1e-12);
        }
    }

    #[test]
    fn extra_pipe_never_lengthens_paths((n, edges) in common::edges(9, 16), a in 0usize..9, b in 0usize..9) {
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let net = common::network(n, &edges);
        let ids: Vec<String> = net.nodes().iter().map(|x| x.id.to_string()).collect();
        let more = net.with_link(Link::pipe("extra", &ids[a], &ids[b], 100.0, 8.0)).unwrap();
        let (d0, d1) = (shortest_paths(&net), shortest_paths(&more));
        for i in 0..n {
            for j in 0..n {
                match (d0.get(i, j), d1.get(i, j)) {
                    (Some(x), Some(y)) => prop_assert!(y <= x),
                    (Some(_), None) => prop_assert!(false, "pair became unreachable"),
                    _ => {}
                }
            }
        }
        prop_assert!(degree_stats(&more).k_max >= degree_stats(&net).k_max);
    }

    #[test]
    fn capacity_shares_sum_to_one((n, edges) in common::edges(9, 20)) {
        let net = common::network(n, &edges);
        for node in net.nodes() {
            let e = entropic_degree(&net, &node.id, LogBase::Natural).unwrap();
            if !e.zero_capacity {
                let total: f64 = e.shares.iter().map(|s| s.1).sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
                prop_assert!(e.g >= e.capacity * (1.0 - 1e-12));
            }
        }
        let table = demand_adjusted(&net, LogBase::Two);
        if table.junction_f_sum > 0.0 {
            let s: f64 = table.rows.iter().map(|r| r.f_norm).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn connected_anc_is_constant((n, edges) in common::connected_edges(10, 12)) {
        let net = common::network(n, &edges);
        let d = shortest_paths(&net).diameter();
        let expected = (n - 1) as f64 / d as f64;
        for row in anc_terms(&net).rows {
            prop_assert_eq!(row.anc, expected);
        }
    }
}

#[test]
fn storage_nodes_follow_convention() {
    use wdn_core::network::Node;
    let nodes = vec![Node::junction("a", 2.0), Node::junction("b", 1.0), Node::tank("t"), Node::reservoir("r")];
    let links = vec![
        Link::pipe("p1", "a", "b", 300.0, 12.0),
        Link::pipe("p2", "b", "t", 100.0, 6.0),
        Link::pipe("p3", "r", "a", 80.0, 16.0),
    ];
    let net = Network::new("storage", nodes, links).unwrap();
    let table = demand_adjusted(&net, LogBase::Natural);
    for row in &table.rows[2..] {
        assert_eq!(row.f, 1.0);
        assert_eq!(row.f_norm, 0.0);
        assert!(row.is_storage_convention());
    }
    assert!((table.rows[0].f_norm + table.rows[1].f_norm - 1.0).abs() < 1e-15);
}
