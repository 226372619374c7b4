#![allow(dead_code)]

use proptest::prelude::*;
use wdn_core::network::{fixtures, HydraulicSeries, HydraulicSnapshot, Link, LinkState, Network, Node};
use wdn_core::scenario::{coverage_relation, generate_scenarios, CoverageRelation, TransportOptions};

/// Edge list on `n` nodes without self-loops; parallel edges allowed.
pub fn edges(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let edge = (0..n, 0..n).prop_filter("no self-loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(edge, 0..=max_m))
    })
}

pub fn connected_edges(max_n: usize, extra: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let tree = prop::collection::vec(any::<prop::sample::Index>(), n - 1);
        let more = prop::collection::vec((0..n, 0..n).prop_filter("no self-loops", |(a, b)| a != b), 0..=extra);
        (Just(n), tree, more).prop_map(|(n, tree, more)| {
            let mut e: Vec<(usize, usize)> = tree.iter().enumerate().map(|(k, ix)| (k + 1, ix.index(k + 1))).collect();
            e.extend(more);
            (n, e)
        })
    })
}

pub fn network(n: usize, edges: &[(usize, usize)]) -> Network {
    fixtures::from_edges("prop", n, edges)
}

/// A network with varied pipe sizes and demands plus one velocity field per scenario.
#[derive(Debug, Clone)]
pub struct Instance {
    pub net: Network,
    pub series: HydraulicSeries,
    pub scenarios: usize,
}

pub const INTERVAL_S: u64 = 300;

pub fn instance(max_n: usize, max_s: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n, 1..=max_s).prop_flat_map(|(n, s)| {
        let edge = (0..n, 0..n, 50.0..900.0f64, 4.0..16.0f64).prop_filter("no self-loops", |e| e.0 != e.1);
        let demands = prop::collection::vec(0.0..5.0f64, n);
        (Just(n), Just(s), prop::collection::vec(edge, 1..=2 * n), demands).prop_flat_map(
            |(n, s, links, demands)| {
                let m = links.len();
                let velocity = prop_oneof![1 => Just(0.0), 4 => 0.05..3.0f64, 4 => -3.0..-0.05f64];
                let fields = prop::collection::vec(prop::collection::vec(velocity, m), s);
                (Just(n), Just(links), Just(demands), fields)
            },
        )
    })
    .prop_map(|(n, links, demands, fields)| {
        let nodes = (0..n).map(|i| Node::junction(format!("J{i}"), demands[i])).collect();
        let links = links
            .iter()
            .enumerate()
            .map(|(k, &(a, b, len, dia))| Link::pipe(format!("P{k}"), &format!("J{a}"), &format!("J{b}"), len.round(), dia.round()))
            .collect();
        let net = Network::new("inst", nodes, links).unwrap();
        let snaps = fields
            .iter()
            .enumerate()
            .map(|(k, v)| HydraulicSnapshot {
                time_s: k as u64 * INTERVAL_S,
                links: v.iter().map(|&x| LinkState::from_signed(x).unwrap()).collect(),
            })
            .collect();
        let scenarios = fields.len();
        Instance {
            series: HydraulicSeries::new(&net, snaps).unwrap(),
            net,
            scenarios,
        }
    })
}

impl Instance {
    pub fn coverage(&self, t: u64) -> CoverageRelation {
        let set = generate_scenarios(self.scenarios as u64 * INTERVAL_S, INTERVAL_S, 7200, t).unwrap();
        coverage_relation(&self.net, &self.series, &set, TransportOptions::default()).unwrap()
    }
}
