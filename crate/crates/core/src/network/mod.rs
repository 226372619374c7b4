//! Water distribution network data model.
//!
//! A [`Network`] is an undirected multigraph of junctions, tanks and
//! reservoirs joined by pipes, pumps and valves. Node and link order is the
//! order of declaration in the source file and every per-node table in the
//! crate is indexed the same way.
//!
//! Lengths are kept in feet and diameters in inches exactly as read; no unit
//! conversion happens anywhere in the toolkit.

mod hydraulics;
mod inp;
mod native;
mod validate;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use hydraulics::{ingest_hydraulics, serialize_hydraulics, FlowSign, HydraulicSeries, HydraulicSnapshot, LinkState};
pub use inp::parse_inp;
pub use native::{parse_native, serialize_native};
pub use validate::{validate, ParallelLinks, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("missing required section [{0}]")]
    MissingSection(String),
    #[error("malformed row in [{section}] at line {line}: {reason}")]
    MalformedSection {
        section: String,
        line: usize,
        reason: String,
    },
    #[error("link {link} references unknown node {node}")]
    DanglingEndpoint { link: String, node: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("link {0} is a self-loop and self-loops are not enabled")]
    SelfLoop(String),
    #[error("invalid attribute on {id}: {reason}")]
    InvalidAttribute { id: String, reason: String },
    #[error("schema violation at {path}: {reason}")]
    SchemaViolation { path: String, reason: String },
    #[error("malformed hydraulic table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error("link {link} missing from hydraulic snapshot at t={time_s} s")]
    MissingLink { link: String, time_s: u64 },
    #[error("hydraulic table references unknown link {0}")]
    UnknownLink(String),
    #[error("hydraulic snapshot times are not strictly increasing at t={0} s")]
    NonmonotoneTime(u64),
}

/// Node identifier as written in the input file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(value: impl Into<String>) -> Result<Self, NetworkError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(NetworkError::InvalidAttribute {
                id: value,
                reason: "node id must be nonempty and contain no whitespace".into(),
            });
        }
        Ok(NodeId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    /// Panics on an empty id; meant for literals in tests and fixtures.
    fn from(value: &str) -> Self {
        NodeId::new(value).expect("invalid node id literal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Junction,
    Reservoir,
    Tank,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Junction => "junction",
            NodeKind::Reservoir => "reservoir",
            NodeKind::Tank => "tank",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "junction" => Some(NodeKind::Junction),
            "reservoir" => Some(NodeKind::Reservoir),
            "tank" => Some(NodeKind::Tank),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Base demand in the file's flow unit. Always 0 for tanks and reservoirs.
    pub base_demand: f64,
    pub coord: Option<(f64, f64)>,
}

impl Node {
    pub fn junction(id: impl Into<String>, base_demand: f64) -> Self {
        Node {
            id: NodeId(id.into()),
            kind: NodeKind::Junction,
            base_demand,
            coord: None,
        }
    }

    pub fn reservoir(id: impl Into<String>) -> Self {
        Node {
            id: NodeId(id.into()),
            kind: NodeKind::Reservoir,
            base_demand: 0.0,
            coord: None,
        }
    }

    pub fn tank(id: impl Into<String>) -> Self {
        Node {
            id: NodeId(id.into()),
            kind: NodeKind::Tank,
            base_demand: 0.0,
            coord: None,
        }
    }

    pub fn with_coord(mut self, x: f64, y: f64) -> Self {
        self.coord = Some((x, y));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Pipe,
    Pump,
    Valve,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::Pipe => "pipe",
            LinkKind::Pump => "pump",
            LinkKind::Valve => "valve",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pipe" => Some(LinkKind::Pipe),
            "pump" => Some(LinkKind::Pump),
            "valve" => Some(LinkKind::Valve),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: String,
    pub kind: LinkKind,
    pub from: NodeId,
    pub to: NodeId,
    /// Feet. Required on pipes, absent on pumps and valves.
    pub length: Option<f64>,
    /// Inches. Required on pipes, optional on valves, absent on pumps.
    pub diameter: Option<f64>,
}

impl Link {
    pub fn pipe(id: impl Into<String>, from: &str, to: &str, length: f64, diameter: f64) -> Self {
        Link {
            id: id.into(),
            kind: LinkKind::Pipe,
            from: NodeId(from.into()),
            to: NodeId(to.into()),
            length: Some(length),
            diameter: Some(diameter),
        }
    }

    pub fn pump(id: impl Into<String>, from: &str, to: &str) -> Self {
        Link {
            id: id.into(),
            kind: LinkKind::Pump,
            from: NodeId(from.into()),
            to: NodeId(to.into()),
            length: None,
            diameter: None,
        }
    }

    pub fn valve(id: impl Into<String>, from: &str, to: &str, diameter: Option<f64>) -> Self {
        Link {
            id: id.into(),
            kind: LinkKind::Valve,
            from: NodeId(from.into()),
            to: NodeId(to.into()),
            length: None,
            diameter,
        }
    }
}

/// A validated, immutable network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    name: String,
    nodes: Vec<Node>,
    links: Vec<Link>,
    allow_self_loops: bool,
    node_index: HashMap<NodeId, usize>,
    link_index: HashMap<String, usize>,
    endpoints: Vec<(usize, usize)>,
}

impl Network {
    pub fn new(name: impl Into<String>, nodes: Vec<Node>, links: Vec<Link>) -> Result<Self, NetworkError> {
        Self::build(name.into(), nodes, links, false)
    }

    /// Like [`Network::new`] but accepts links whose endpoints coincide.
    pub fn with_self_loops(
        name: impl Into<String>,
        nodes: Vec<Node>,
        links: Vec<Link>,
    ) -> Result<Self, NetworkError> {
        Self::build(name.into(), nodes, links, true)
    }

    fn build(
        name: String,
        nodes: Vec<Node>,
        links: Vec<Link>,
        allow_self_loops: bool,
    ) -> Result<Self, NetworkError> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            NodeId::new(node.id.as_str())?;
            if node_index.insert(node.id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateId(node.id.to_string()));
            }
            check_node(node)?;
        }

        let mut link_index = HashMap::with_capacity(links.len());
        let mut endpoints = Vec::with_capacity(links.len());
        for (i, link) in links.iter().enumerate() {
            if link.id.is_empty() || link.id.chars().any(char::is_whitespace) {
                return Err(NetworkError::InvalidAttribute {
                    id: link.id.clone(),
                    reason: "link id must be nonempty and contain no whitespace".into(),
                });
            }
            if link_index.insert(link.id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateId(link.id.clone()));
            }
            let resolve = |n: &NodeId| {
                node_index
                    .get(n)
                    .copied()
                    .ok_or_else(|| NetworkError::DanglingEndpoint {
                        link: link.id.clone(),
                        node: n.to_string(),
                    })
            };
            let (a, b) = (resolve(&link.from)?, resolve(&link.to)?);
            if a == b && !allow_self_loops {
                return Err(NetworkError::SelfLoop(link.id.clone()));
            }
            check_link(link)?;
            endpoints.push((a, b));
        }

        Ok(Network {
            name,
            nodes,
            links,
            allow_self_loops,
            node_index,
            link_index,
            endpoints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn pipe_count(&self) -> usize {
        self.links.iter().filter(|l| l.kind == LinkKind::Pipe).count()
    }

    pub fn allows_self_loops(&self) -> bool {
        self.allow_self_loops
    }

    pub fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.link_index.get(id).copied()
    }

    /// Node indices of a link's (from, to) endpoints.
    pub fn endpoints(&self, link: usize) -> (usize, usize) {
        self.endpoints[link]
    }

    /// Incident link indices per node. A self-loop appears twice in its node's list.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (l, &(a, b)) in self.endpoints.iter().enumerate() {
            inc[a].push(l);
            inc[b].push(l);
        }
        inc
    }

    /// Returns a copy with nodes reordered so that new position `k` holds
    /// old node `order[k]`. Link order is unchanged.
    pub fn permuted(&self, order: &[usize]) -> Result<Network, NetworkError> {
        let nodes = order.iter().map(|&i| self.nodes[i].clone()).collect();
        Self::build(self.name.clone(), nodes, self.links.clone(), self.allow_self_loops)
    }

    /// Returns a copy with one more link appended.
    pub fn with_link(&self, link: Link) -> Result<Network, NetworkError> {
        let mut links = self.links.clone();
        links.push(link);
        Self::build(self.name.clone(), self.nodes.clone(), links, self.allow_self_loops)
    }
}

fn check_node(node: &Node) -> Result<(), NetworkError> {
    let bad = |reason: &str| {
        Err(NetworkError::InvalidAttribute {
            id: node.id.to_string(),
            reason: reason.into(),
        })
    };
    if !node.base_demand.is_finite() {
        return bad("base demand must be finite");
    }
    match node.kind {
        NodeKind::Junction if node.base_demand < 0.0 => bad("junction base demand must be >= 0"),
        NodeKind::Reservoir | NodeKind::Tank if node.base_demand != 0.0 => {
            bad("tanks and reservoirs carry no base demand")
        }
        _ => Ok(()),
    }?;
    if let Some((x, y)) = node.coord {
        if !x.is_finite() || !y.is_finite() {
            return bad("coordinates must be finite");
        }
    }
    Ok(())
}

fn check_link(link: &Link) -> Result<(), NetworkError> {
    let bad = |reason: &str| {
        Err(NetworkError::InvalidAttribute {
            id: link.id.clone(),
            reason: reason.into(),
        })
    };
    for (name, value) in [("length", link.length), ("diameter", link.diameter)] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("{name} must be a positive finite number"));
            }
        }
    }
    match link.kind {
        LinkKind::Pipe if link.length.is_none() => bad("pipe requires a length"),
        LinkKind::Pipe if link.diameter.is_none() => bad("pipe requires a diameter"),
        LinkKind::Pump if link.length.is_some() || link.diameter.is_some() => {
            bad("pumps carry no length or diameter")
        }
        LinkKind::Valve if link.length.is_some() => bad("valves carry no length"),
        _ => Ok(()),
    }
}

/// Small named fixtures shared by tests, examples and the CLI smoke tests.
pub mod fixtures {
    use super::*;

    fn pipe_chain(name: &str, ids: &[&str], edges: &[(usize, usize)]) -> Network {
        let nodes = ids.iter().map(|id| Node::junction(*id, 1.0)).collect();
        let links = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Link::pipe(format!("P{k}"), ids[a], ids[b], 100.0, 8.0))
            .collect();
        Network::new(name, nodes, links).expect("fixture is valid")
    }

    /// Builds a pipe-only network over nodes `N0..N{n-1}`.
    pub fn from_edges(name: &str, n: usize, edges: &[(usize, usize)]) -> Network {
        let ids: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        pipe_chain(name, &refs, edges)
    }

    pub fn triangle() -> Network {
        from_edges("triangle", 3, &[(0, 1), (1, 2), (2, 0)])
    }

    /// Center `N0` with `leaves` leaves.
    pub fn star(leaves: usize) -> Network {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        from_edges("star", leaves + 1, &edges)
    }

    pub fn path(n: usize) -> Network {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        from_edges("path", n, &edges)
    }

    pub fn cycle(n: usize) -> Network {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        from_edges("cycle", n, &edges)
    }
}
