//! Contamination-warning sensor placement for water distribution networks.
//!
//! The crate is organised as a pipeline:
//!
//! * [`network`] reads network descriptions and hydraulic results,
//! * [`metrics`] computes topological metrics and capacity-based node weights,
//! * [`scenario`] builds contamination scenarios and the detection coverage relation,
//! * [`optimizer`] selects sensor sets that trade scenario coverage against
//!   diffusion-weighted node importance.

pub mod network;
pub mod metrics;
pub mod scenario;
pub mod optimizer;
