//! Average node coverage: (component size − 1) / largest geodesic distance.

use super::topology::{DistanceMatrix, Topology};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncMode {
    /// Divide by the diameter of the node's component.
    #[default]
    Component,
    /// Divide by the node's own eccentricity. Experimental.
    Eccentricity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncTerm {
    pub cs_minus_1: usize,
    pub lgd: u32,
    pub anc: f64,
    /// Single-node component: LGD undefined, anc set to 0.
    pub singleton: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AncTermTable {
    pub rows: Vec<AncTerm>,
    pub mode: AncMode,
}

impl AncTermTable {
    pub fn anc(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.anc).collect()
    }
}

pub fn anc_terms(net: &Network) -> AncTermTable {
    anc_terms_with(net, AncMode::Component)
}

pub fn anc_terms_with(net: &Network, mode: AncMode) -> AncTermTable {
    let topo = Topology::from_network(net);
    let dm = DistanceMatrix::from_topology(&topo);
    anc_from(&topo, &dm, mode)
}

pub fn anc_from(topo: &Topology, dm: &DistanceMatrix, mode: AncMode) -> AncTermTable {
    let n = topo.node_count();
    let label = topo.components();
    let count = label.iter().copied().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; count];
    let mut lgd = vec![0u32; count];
    let ecc: Vec<u32> = (0..n).map(|v| dm.eccentricity(v)).collect();
    for v in 0..n {
        size[label[v]] += 1;
        lgd[label[v]] = lgd[label[v]].max(ecc[v]);
    }
    let rows = (0..n)
        .map(|v| {
            let c = label[v];
            let cs_minus_1 = size[c] - 1;
            let denom = match mode {
                AncMode::Component => lgd[c],
                AncMode::Eccentricity => ecc[v],
            };
            let singleton = cs_minus_1 == 0;
            AncTerm {
                cs_minus_1,
                lgd: denom,
                anc: if singleton { 0.0 } else { cs_minus_1 as f64 / f64::from(denom) },
                singleton,
            }
        })
        .collect();
    AncTermTable { rows, mode }
}
