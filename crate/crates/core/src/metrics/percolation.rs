//! Critical fraction of node removal.
//!
//! Two estimators: the Molloy–Reed analytic value from the degree moments,
//! and a seeded random-removal experiment on the simple projection.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::centrality::degree_stats;
use super::topology::Topology;
use super::MetricsError;
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalFractionMode {
    Analytic,
    Empirical {
        trials: usize,
        seed: u64,
        /// Percolation is considered lost once the largest component
        /// holds fewer than this fraction of all nodes.
        threshold: f64,
    },
}

impl CriticalFractionMode {
    pub const DEFAULT_THRESHOLD: f64 = 0.05;

    pub fn empirical(trials: usize, seed: u64) -> Self {
        CriticalFractionMode::Empirical {
            trials,
            seed,
            threshold: Self::DEFAULT_THRESHOLD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CriticalFractionMode::Analytic => "analytic",
            CriticalFractionMode::Empirical { .. } => "empirical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalFraction {
    pub value: f64,
    pub mode: CriticalFractionMode,
    /// Analytic mode only: set when ⟨k²⟩/⟨k⟩ ≤ 1 and the value was forced to 0.
    pub degenerate: bool,
}

pub fn critical_fraction(net: &Network, mode: CriticalFractionMode) -> Result<CriticalFraction, MetricsError> {
    match mode {
        CriticalFractionMode::Analytic => {
            let degrees = degree_stats(net).per_node;
            let (value, degenerate) = molloy_reed(&degrees);
            Ok(CriticalFraction { value, mode, degenerate })
        }
        CriticalFractionMode::Empirical { trials, seed, threshold } => {
            let value = random_removal(&Topology::from_network(net), trials, seed, threshold)?;
            Ok(CriticalFraction {
                value,
                mode,
                degenerate: false,
            })
        }
    }
}

/// f_c = 1 − 1/(κ − 1) with κ = ⟨k²⟩/⟨k⟩, clamped to [0, 1].
/// Returns `(0, true)` when κ ≤ 1.
pub fn molloy_reed(degrees: &[usize]) -> (f64, bool) {
    let n = degrees.len() as f64;
    let k1: f64 = degrees.iter().map(|&k| k as f64).sum::<f64>() / n;
    let k2: f64 = degrees.iter().map(|&k| (k * k) as f64).sum::<f64>() / n;
    if degrees.is_empty() || k1 == 0.0 {
        return (0.0, true);
    }
    let kappa = k2 / k1;
    if kappa <= 1.0 {
        return (0.0, true);
    }
    ((1.0 - 1.0 / (kappa - 1.0)).clamp(0.0, 1.0), false)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Mean fraction of uniformly removed nodes at which the largest component
/// first drops below `threshold * N`.
pub fn random_removal(topo: &Topology, trials: usize, seed: u64, threshold: f64) -> Result<f64, MetricsError> {
    let n = topo.node_count();
    if trials == 0 {
        return Err(MetricsError::InvalidArgument("trials must be positive".into()));
    }
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(MetricsError::InvalidArgument(format!("threshold {threshold} outside (0, 1]")));
    }
    if n == 0 {
        return Err(MetricsError::DegenerateGraph("empty network".into()));
    }
    let limit = threshold * n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut parent = vec![0usize; n];
    let mut size = vec![0usize; n];
    let mut present = vec![false; n];
    // largest[r] = largest component size after removing the first r nodes
    let mut largest = vec![0usize; n + 1];
    let mut total = 0.0;

    for _ in 0..trials {
        order.shuffle(&mut rng);
        present.fill(false);
        // Re-insert nodes in reverse removal order and track the giant component.
        let mut best = 0usize;
        largest[n] = 0;
        for r in (0..n).rev() {
            let v = order[r];
            present[v] = true;
            parent[v] = v;
            size[v] = 1;
            for &w in topo.neighbors(v) {
                if present[w] {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                    if a != b {
                        let (big, small) = if size[a] >= size[b] { (a, b) } else { (b, a) };
                        parent[small] = big;
                        size[big] += size[small];
                    }
                }
            }
            best = best.max(size[find(&mut parent, v)]);
            largest[r] = best;
        }
        let removed = (0..=n).find(|&r| (largest[r] as f64) < limit).unwrap_or(n);
        total += removed as f64 / n as f64;
    }
    Ok(total / trials as f64)
}
