mod common;

use proptest::prelude::*;
use wdn_core::scenario::{flow_digraph, parse_coverage, serialize_coverage, TransportOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn longer_coverage_time_only_adds(inst in common::instance(10, 3), t in 1u64..3000, extra in 0u64..3000) {
        let short = inst.coverage(t);
        let long = inst.coverage(t + extra);
        prop_assert!(short.is_subset_of(&long));
        for s in 0..short.scenario_count() {
            for i in 0..short.node_count() {
                prop_assert!(short.covers(i, i, s));
            }
        }
    }

    #[test]
    fn detection_follows_flow(inst in common::instance(10, 3), t in 1u64..5000) {
        let rel = inst.coverage(t);
        for (s, snap) in inst.series.snapshots().iter().enumerate() {
            let g = flow_digraph(&inst.net, snap, TransportOptions::default()).unwrap();
            for i in 0..rel.node_count() {
                let mut seen = vec![false; g.node_count()];
                let mut stack = vec![i];
                seen[i] = true;
                while let Some(v) = stack.pop() {
                    for &(u, _) in g.arcs(v) {
                        if !seen[u] {
                            seen[u] = true;
                            stack.push(u);
                        }
                    }
                }
                for j in 0..rel.node_count() {
                    if rel.covers(i, j, s) {
                        prop_assert!(seen[j], "({}, {}, {}) covered without a flow path", i, j, s);
                    }
                }
            }
        }
    }

    #[test]
    fn relation_is_deterministic(inst in common::instance(8, 2)) {
        let a = inst.coverage(900);
        prop_assert_eq!(&a, &inst.coverage(900));
        prop_assert_eq!(parse_coverage(&serialize_coverage(&a)).unwrap(), a);
    }
}
