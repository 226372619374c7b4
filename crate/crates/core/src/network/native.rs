//! The toolkit's own line-oriented network format.
//!
//! ```text
//! wdn-net v1
//! name <name>                      (optional, rest of line)
//! option self-loops                (optional)
//! node <id> <kind> <demand> [<x> <y>]
//! link <id> <kind> <from> <to> [len=<ft>] [dia=<in>]
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Numbers are written
//! in shortest round-trip form, so serializing and re-reading is lossless.

use std::fmt::Write;

use super::{Link, LinkKind, Network, NetworkError, Node, NodeId, NodeKind};

const HEADER: &str = "wdn-net v1";

fn violation(path: impl Into<String>, reason: impl Into<String>) -> NetworkError {
    NetworkError::SchemaViolation {
        path: path.into(),
        reason: reason.into(),
    }
}

fn number(path: &str, raw: &str) -> Result<f64, NetworkError> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| violation(path, format!("{raw:?} is not a finite number")))
}

pub fn parse_native(text: &str) -> Result<Network, NetworkError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, other)) => return Err(violation(format!("line {n}"), format!("expected header {HEADER:?}, found {other:?}"))),
        None => return Err(violation("line 1", "empty document")),
    }

    let mut name = String::new();
    let mut self_loops = false;
    let mut nodes = Vec::new();
    let mut links = Vec::new();

    for (n, line) in lines {
        let cols: Vec<&str> = line.split_whitespace().collect();
        match cols[0] {
            "name" => name = line["name".len()..].trim().to_string(),
            "option" => match cols.get(1) {
                Some(&"self-loops") if cols.len() == 2 => self_loops = true,
                _ => return Err(violation(format!("line {n}"), format!("unknown option {line:?}"))),
            },
            "node" => nodes.push(parse_node(n, &cols)?),
            "link" => links.push(parse_link(n, &cols)?),
            other => return Err(violation(format!("line {n}"), format!("unknown record type {other:?}"))),
        }
    }

    if self_loops {
        Network::with_self_loops(name, nodes, links)
    } else {
        Network::new(name, nodes, links)
    }
}

fn parse_node(line: usize, cols: &[&str]) -> Result<Node, NetworkError> {
    let base = format!("line {line}: node");
    if !(cols.len() == 4 || cols.len() == 6) {
        return Err(violation(base, "expected `node <id> <kind> <demand> [<x> <y>]`"));
    }
    let path = format!("line {line}: node[{}]", cols[1]);
    let id = NodeId::new(cols[1]).map_err(|e| violation(format!("{path}.id"), e.to_string()))?;
    let kind = NodeKind::parse(cols[2])
        .ok_or_else(|| violation(format!("{path}.kind"), format!("unknown node kind {:?}", cols[2])))?;
    let base_demand = number(&format!("{path}.demand"), cols[3])?;
    let coord = if cols.len() == 6 {
        Some((number(&format!("{path}.x"), cols[4])?, number(&format!("{path}.y"), cols[5])?))
    } else {
        None
    };
    Ok(Node {
        id,
        kind,
        base_demand,
        coord,
    })
}

fn parse_link(line: usize, cols: &[&str]) -> Result<Link, NetworkError> {
    if cols.len() < 5 {
        return Err(violation(
            format!("line {line}: link"),
            "expected `link <id> <kind> <from> <to> [len=<ft>] [dia=<in>]`",
        ));
    }
    let path = format!("line {line}: link[{}]", cols[1]);
    let kind = LinkKind::parse(cols[2])
        .ok_or_else(|| violation(format!("{path}.kind"), format!("unknown link kind {:?}", cols[2])))?;
    let from = NodeId::new(cols[3]).map_err(|e| violation(format!("{path}.from"), e.to_string()))?;
    let to = NodeId::new(cols[4]).map_err(|e| violation(format!("{path}.to"), e.to_string()))?;

    let mut length = None;
    let mut diameter = None;
    for attr in &cols[5..] {
        let (key, value) = attr
            .split_once('=')
            .ok_or_else(|| violation(path.clone(), format!("expected key=value, found {attr:?}")))?;
        let slot = match key {
            "len" => &mut length,
            "dia" => &mut diameter,
            _ => return Err(violation(format!("{path}.{key}"), "unknown attribute")),
        };
        if slot.is_some() {
            return Err(violation(format!("{path}.{key}"), "attribute given twice"));
        }
        let v = number(&format!("{path}.{key}"), value)?;
        if v <= 0.0 {
            return Err(violation(format!("{path}.{key}"), "must be positive"));
        }
        *slot = Some(v);
    }

    match kind {
        LinkKind::Pipe if length.is_none() => return Err(violation(format!("{path}.len"), "required on pipes")),
        LinkKind::Pipe if diameter.is_none() => return Err(violation(format!("{path}.dia"), "required on pipes")),
        LinkKind::Pump if length.is_some() => return Err(violation(format!("{path}.len"), "not allowed on pumps")),
        LinkKind::Pump if diameter.is_some() => return Err(violation(format!("{path}.dia"), "not allowed on pumps")),
        LinkKind::Valve if length.is_some() => return Err(violation(format!("{path}.len"), "not allowed on valves")),
        _ => {}
    }

    Ok(Link {
        id: cols[1].to_string(),
        kind,
        from,
        to,
        length,
        diameter,
    })
}

pub fn serialize_native(net: &Network) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if !net.name().is_empty() {
        writeln!(out, "name {}", net.name()).unwrap();
    }
    if net.allows_self_loops() {
        out.push_str("option self-loops\n");
    }
    for node in net.nodes() {
        write!(out, "node {} {} {:?}", node.id, node.kind.as_str(), node.base_demand).unwrap();
        if let Some((x, y)) = node.coord {
            write!(out, " {x:?} {y:?}").unwrap();
        }
        out.push('\n');
    }
    for link in net.links() {
        write!(out, "link {} {} {} {}", link.id, link.kind.as_str(), link.from, link.to).unwrap();
        if let Some(len) = link.length {
            write!(out, " len={len:?}").unwrap();
        }
        if let Some(dia) = link.diameter {
            write!(out, " dia={dia:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures;
    use proptest::prelude::*;

    fn two_node() -> Network {
        let nodes = vec![
            Node::junction("6", 1.85).with_coord(10.0, -2.5),
            Node::junction("7", 0.0),
        ];
        Network::new("two", nodes, vec![Link::pipe("LINK-8", "6", "7", 502.0, 8.0)]).unwrap()
    }

    #[test]
    fn two_node_round_trip() {
        let net = two_node();
        let text = serialize_native(&net);
        assert_eq!(parse_native(&text).unwrap(), net);
    }

    #[test]
    fn triangle_counts() {
        let text = "wdn-net v1\nnode a junction 0\nnode b junction 1\nnode c tank 0\n\
                    link p1 pipe a b len=1 dia=2\nlink p2 pipe b c len=1 dia=2\nlink p3 pipe c a len=1 dia=2\n";
        let net = parse_native(text).unwrap();
        assert_eq!((net.node_count(), net.link_count()), (3, 3));
    }

    #[test]
    fn pipe_without_length() {
        let text = "wdn-net v1\nnode a junction 0\nnode b junction 0\nlink p1 pipe a b dia=8\n";
        match parse_native(text).unwrap_err() {
            NetworkError::SchemaViolation { path, .. } => assert_eq!(path, "line 4: link[p1].len"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        for text in [
            "",
            "wdn-net v2\n",
            "wdn-net v1\nnode a pond 0\n",
            "wdn-net v1\nnode a junction x\n",
            "wdn-net v1\nnode a junction 0 1\n",
            "wdn-net v1\nnode a junction 0\nnode b junction 0\nlink p pump a b len=3\n",
            "wdn-net v1\nnode a junction 0\nnode b junction 0\nlink p pipe a b len=3 dia=2 len=4\n",
            "wdn-net v1\nnode a junction 0\nnode b junction 0\nlink p pipe a b len=3 rough=2\n",
            "wdn-net v1\nedge a b\n",
        ] {
            assert!(
                matches!(parse_native(text), Err(NetworkError::SchemaViolation { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn self_loop_option_round_trips() {
        let text = "wdn-net v1\noption self-loops\nnode a junction 0\nlink p pipe a a len=1 dia=1\n";
        let net = parse_native(text).unwrap();
        assert!(net.allows_self_loops());
        assert_eq!(parse_native(&serialize_native(&net)).unwrap(), net);
    }

    #[test]
    fn fixture_round_trip() {
        for net in [fixtures::triangle(), fixtures::star(3), fixtures::cycle(5)] {
            assert_eq!(parse_native(&serialize_native(&net)).unwrap(), net);
        }
    }

    fn arb_network() -> impl Strategy<Value = Network> {
        (2usize..8).prop_flat_map(|n| {
            let nodes = proptest::collection::vec(
                (0u8..3, 0.0f64..500.0, proptest::option::of((-1e4f64..1e4, -1e4f64..1e4))),
                n,
            );
            let links = proptest::collection::vec((0..n, 0..n, 0u8..3, 0.01f64..1e4, 0.01f64..60.0, any::<bool>()), 0..12);
            (nodes, links).prop_map(move |(nodes, links)| {
                let nodes: Vec<Node> = nodes
                    .into_iter()
                    .enumerate()
                    .map(|(i, (k, d, coord))| {
                        let mut node = match k {
                            0 => Node::junction(format!("J{i}"), d),
                            1 => Node::tank(format!("T{i}")),
                            _ => Node::reservoir(format!("R{i}")),
                        };
                        node.coord = coord;
                        node
                    })
                    .collect();
                let links = links
                    .into_iter()
                    .filter(|(a, b, ..)| a != b)
                    .enumerate()
                    .map(|(k, (a, b, kind, len, dia, has_dia))| {
                        let (f, t) = (nodes[a].id.as_str(), nodes[b].id.as_str());
                        match kind {
                            0 => Link::pipe(format!("L{k}"), f, t, len, dia),
                            1 => Link::pump(format!("L{k}"), f, t),
                            _ => Link::valve(format!("L{k}"), f, t, has_dia.then_some(dia)),
                        }
                    })
                    .collect();
                Network::new("arb", nodes, links).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(net in arb_network()) {
            let text = serialize_native(&net);
            prop_assert_eq!(parse_native(&text).unwrap(), net);
        }
    }
}
