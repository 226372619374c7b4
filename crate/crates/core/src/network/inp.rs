//! Reader for the section-based hydraulic-simulator input format.
//!
//! Supported sections: `[JUNCTIONS]`, `[RESERVOIRS]`, `[TANKS]`, `[PIPES]`,
//! `[PUMPS]`, `[VALVES]`, `[COORDINATES]`, `[DEMANDS]` and `[TITLE]` (first
//! line becomes the network name). Anything else is skipped with a warning.
//! Columns are whitespace-delimited and `;` starts a comment.

use std::collections::{BTreeMap, HashMap};

use log::warn;

use super::{Link, LinkKind, Network, NetworkError, Node, NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Title,
    Junctions,
    Reservoirs,
    Tanks,
    Pipes,
    Pumps,
    Valves,
    Coordinates,
    Demands,
    End,
    Skipped,
    None,
}

impl Section {
    fn from_header(header: &str) -> Section {
        match header.to_ascii_uppercase().as_str() {
            "TITLE" => Section::Title,
            "JUNCTIONS" => Section::Junctions,
            "RESERVOIRS" => Section::Reservoirs,
            "TANKS" => Section::Tanks,
            "PIPES" => Section::Pipes,
            "PUMPS" => Section::Pumps,
            "VALVES" => Section::Valves,
            "COORDINATES" => Section::Coordinates,
            "DEMANDS" => Section::Demands,
            "END" => Section::End,
            _ => Section::Skipped,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Section::Title => "TITLE",
            Section::Junctions => "JUNCTIONS",
            Section::Reservoirs => "RESERVOIRS",
            Section::Tanks => "TANKS",
            Section::Pipes => "PIPES",
            Section::Pumps => "PUMPS",
            Section::Valves => "VALVES",
            Section::Coordinates => "COORDINATES",
            Section::Demands => "DEMANDS",
            Section::End => "END",
            Section::Skipped | Section::None => "",
        }
    }
}

struct Row<'a> {
    section: Section,
    line: usize,
    cols: Vec<&'a str>,
}

impl<'a> Row<'a> {
    fn err(&self, reason: impl Into<String>) -> NetworkError {
        NetworkError::MalformedSection {
            section: self.section.name().to_string(),
            line: self.line,
            reason: reason.into(),
        }
    }

    fn require(&self, n: usize) -> Result<(), NetworkError> {
        if self.cols.len() < n {
            Err(self.err(format!("expected at least {n} columns, found {}", self.cols.len())))
        } else {
            Ok(())
        }
    }

    fn number(&self, idx: usize, what: &str) -> Result<f64, NetworkError> {
        let raw = self.cols[idx];
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.err(format!("{what} {raw:?} is not a number")))
    }

    fn node_id(&self, idx: usize) -> Result<NodeId, NetworkError> {
        NodeId::new(self.cols[idx]).map_err(|e| self.err(e.to_string()))
    }
}

pub fn parse_inp(text: &str) -> Result<Network, NetworkError> {
    let mut section = Section::None;
    let mut seen_junctions = false;
    let mut seen_pipes = false;
    let mut title: Option<String> = None;

    let mut nodes: Vec<Node> = Vec::new();
    let mut links: Vec<Link> = Vec::new();
    let mut coords: Vec<Row> = Vec::new();
    let mut demand_rows: Vec<Row> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let header = rest.strip_suffix(']').ok_or_else(|| NetworkError::MalformedSection {
                section: String::new(),
                line,
                reason: format!("unterminated section header {content:?}"),
            })?;
            section = Section::from_header(header.trim());
            match section {
                Section::Junctions => seen_junctions = true,
                Section::Pipes => seen_pipes = true,
                Section::Skipped => warn!("skipping unsupported section [{}] at line {line}", header.trim()),
                _ => {}
            }
            continue;
        }
        if section == Section::Title {
            title.get_or_insert_with(|| content.to_string());
            continue;
        }
        let row = Row {
            section,
            line,
            cols: content.split_whitespace().collect(),
        };
        match section {
            Section::Junctions => {
                // ID Elev [Demand] [Pattern]
                row.require(2)?;
                let demand = if row.cols.len() > 2 { row.number(2, "demand")? } else { 0.0 };
                if demand < 0.0 {
                    return Err(row.err("negative base demand"));
                }
                row.number(1, "elevation")?;
                nodes.push(Node {
                    id: row.node_id(0)?,
                    kind: NodeKind::Junction,
                    base_demand: demand,
                    coord: None,
                });
            }
            Section::Reservoirs | Section::Tanks => {
                row.require(2)?;
                row.number(1, "head/elevation")?;
                let kind = if section == Section::Tanks { NodeKind::Tank } else { NodeKind::Reservoir };
                nodes.push(Node {
                    id: row.node_id(0)?,
                    kind,
                    base_demand: 0.0,
                    coord: None,
                });
            }
            Section::Pipes => {
                // ID Node1 Node2 Length Diameter [Roughness] [MinorLoss] [Status]
                row.require(5)?;
                let length = row.number(3, "length")?;
                let diameter = row.number(4, "diameter")?;
                if length <= 0.0 || diameter <= 0.0 {
                    return Err(row.err("pipe length and diameter must be positive"));
                }
                links.push(Link {
                    id: row.cols[0].to_string(),
                    kind: LinkKind::Pipe,
                    from: row.node_id(1)?,
                    to: row.node_id(2)?,
                    length: Some(length),
                    diameter: Some(diameter),
                });
            }
            Section::Pumps => {
                row.require(3)?;
                links.push(Link {
                    id: row.cols[0].to_string(),
                    kind: LinkKind::Pump,
                    from: row.node_id(1)?,
                    to: row.node_id(2)?,
                    length: None,
                    diameter: None,
                });
            }
            Section::Valves => {
                // ID Node1 Node2 Diameter Type Setting [MinorLoss]
                row.require(4)?;
                let diameter = row.number(3, "diameter")?;
                if diameter <= 0.0 {
                    return Err(row.err("valve diameter must be positive"));
                }
                links.push(Link {
                    id: row.cols[0].to_string(),
                    kind: LinkKind::Valve,
                    from: row.node_id(1)?,
                    to: row.node_id(2)?,
                    length: None,
                    diameter: Some(diameter),
                });
            }
            Section::Coordinates => {
                row.require(3)?;
                coords.push(row);
            }
            Section::Demands => {
                row.require(2)?;
                demand_rows.push(row);
            }
            Section::None => {
                return Err(NetworkError::MalformedSection {
                    section: String::new(),
                    line,
                    reason: "data before the first section header".into(),
                })
            }
            Section::Title | Section::End | Section::Skipped => {}
        }
        if section == Section::End {
            break;
        }
    }

    if !seen_junctions {
        return Err(NetworkError::MissingSection("JUNCTIONS".into()));
    }
    if !seen_pipes {
        return Err(NetworkError::MissingSection("PIPES".into()));
    }

    let position: HashMap<NodeId, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, node)| (node.id.clone(), i))
        .collect();
    let lookup = |row: &Row| {
        let id = row.node_id(0)?;
        position
            .get(&id)
            .copied()
            .ok_or_else(|| row.err(format!("unknown node {id}")))
    };

    for row in &coords {
        let i = lookup(row)?;
        nodes[i].coord = Some((row.number(1, "x")?, row.number(2, "y")?));
    }

    // Entries in [DEMANDS] replace the junction's own demand; several
    // categories for one junction add up.
    let mut demands: BTreeMap<usize, f64> = BTreeMap::new();
    for row in &demand_rows {
        let i = lookup(row)?;
        if nodes[i].kind != NodeKind::Junction {
            return Err(row.err("demands may only be assigned to junctions"));
        }
        let d = row.number(1, "demand")?;
        if d < 0.0 {
            return Err(row.err("negative base demand"));
        }
        *demands.entry(i).or_insert(0.0) += d;
    }
    for (i, d) in demands {
        nodes[i].base_demand = d;
    }

    Network::new(title.unwrap_or_default(), nodes, links)
}
