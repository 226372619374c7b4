//! Static SVG drawing of a network with a sensor placement.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use wdn_core::network::{Network, NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub node_radius: f64,
    pub sensor_radius: f64,
    /// Coverage circle radius around each sensor, in network coordinate units.
    pub coverage_radius: Option<f64>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 800.0,
            height: 600.0,
            margin: 24.0,
            node_radius: 3.0,
            sensor_radius: 7.0,
            coverage_radius: None,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let dims = [self.width, self.height, self.node_radius, self.sensor_radius];
        if dims.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            bail!("canvas size and marker radii must be positive");
        }
        if !(self.margin.is_finite() && self.margin >= 0.0 && 2.0 * self.margin < self.width.min(self.height)) {
            bail!("margin must be non-negative and leave room for the drawing");
        }
        if let Some(r) = self.coverage_radius {
            if !(r.is_finite() && r > 0.0) {
                bail!("coverage radius must be positive");
            }
        }
        Ok(())
    }
}

/// Stored coordinates when every node has them, otherwise a row-major grid
/// in node order (a synthetic layout with no geographic meaning).
pub fn layout(net: &Network) -> Vec<(f64, f64)> {
    if let Some(coords) = net.nodes().iter().map(|n| n.coord).collect::<Option<Vec<_>>>() {
        return coords;
    }
    let n = net.node_count();
    let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
    (0..n).map(|k| ((k % cols) as f64, -((k / cols) as f64))).collect()
}

fn escape(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '&' => "&amp;".to_owned(),
            '<' => "&lt;".to_owned(),
            '>' => "&gt;".to_owned(),
            '"' => "&quot;".to_owned(),
            '\'' => "&apos;".to_owned(),
            c => c.to_string(),
        })
        .collect()
}

pub fn render_svg(net: &Network, sensors: &[NodeId], spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let pos = layout(net);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pos {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let inner_w = spec.width - 2.0 * spec.margin;
    let inner_h = spec.height - 2.0 * spec.margin;
    let span_x = if pos.is_empty() { 0.0 } else { x1 - x0 };
    let span_y = if pos.is_empty() { 0.0 } else { y1 - y0 };
    let scale = match (span_x > 0.0, span_y > 0.0) {
        (true, true) => (inner_w / span_x).min(inner_h / span_y),
        (true, false) => inner_w / span_x,
        (false, true) => inner_h / span_y,
        (false, false) => 1.0,
    };
    // centre the drawing; flip y so that north is up
    let off_x = spec.margin + (inner_w - span_x * scale) / 2.0;
    let off_y = spec.margin + (inner_h - span_y * scale) / 2.0;
    let screen: Vec<(f64, f64)> = pos
        .iter()
        .map(|&(x, y)| (off_x + (x - x0) * scale, off_y + (y1 - y) * scale))
        .collect();

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        spec.width, spec.height, spec.width, spec.height
    )?;
    writeln!(w, "<title>{}</title>", escape(net.name()))?;
    writeln!(w, r#"<rect width="100%" height="100%" fill="white"/>"#)?;

    writeln!(w, r##"<g class="links" stroke="#7f8c8d" stroke-width="1.5">"##)?;
    for (l, link) in net.links().iter().enumerate() {
        let (a, b) = net.endpoints(l);
        let (xa, ya) = screen[a];
        let (xb, yb) = screen[b];
        writeln!(
            w,
            r#"<line class="link {}" x1="{xa:.2}" y1="{ya:.2}" x2="{xb:.2}" y2="{yb:.2}"><title>{}</title></line>"#,
            link.kind.as_str(),
            escape(&link.id)
        )?;
    }
    writeln!(w, "</g>")?;

    let sensor_idx: Vec<usize> = sensors
        .iter()
        .map(|id| match net.node_index(id) {
            Some(i) => Ok(i),
            None => bail!("sensor {id} is not a node of the network"),
        })
        .collect::<Result<_>>()?;

    if let Some(r) = spec.coverage_radius {
        writeln!(w, r##"<g class="coverage" fill="#e67e22" fill-opacity="0.12" stroke="#e67e22">"##)?;
        for &i in &sensor_idx {
            let (x, y) = screen[i];
            writeln!(w, r#"<circle class="coverage" cx="{x:.2}" cy="{y:.2}" r="{:.2}"/>"#, r * scale)?;
        }
        writeln!(w, "</g>")?;
    }

    writeln!(w, r#"<g class="nodes">"#)?;
    for (node, &(x, y)) in net.nodes().iter().zip(&screen) {
        let id = escape(node.id.as_str());
        let r = spec.node_radius;
        match node.kind {
            NodeKind::Junction => writeln!(
                w,
                r##"<circle class="node junction" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="#2c3e50"><title>{id}</title></circle>"##
            )?,
            kind => writeln!(
                w,
                r##"<rect class="node {}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#2980b9"><title>{id}</title></rect>"##,
                kind.as_str(),
                x - 1.5 * r,
                y - 1.5 * r,
                3.0 * r,
                3.0 * r
            )?,
        }
    }
    writeln!(w, "</g>")?;

    writeln!(w, r##"<g class="sensors" fill="#c0392b" stroke="black" stroke-width="1">"##)?;
    for &i in &sensor_idx {
        let (x, y) = screen[i];
        writeln!(
            w,
            r#"<circle class="sensor" cx="{x:.2}" cy="{y:.2}" r="{:.2}"><title>{}</title></circle>"#,
            spec.sensor_radius,
            escape(net.nodes()[i].id.as_str())
        )?;
    }
    writeln!(w, "</g>")?;
    writeln!(w, "</svg>")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wdn_core::network::{fixtures, Node};

    #[test]
    fn triangle_with_one_sensor() {
        let net = fixtures::triangle();
        let svg = render_svg(&net, &["N1".into()], &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<line ").count(), 3);
        assert_eq!(svg.matches(r#"class="node "#).count(), 3);
        assert_eq!(svg.matches(r#"class="sensor""#).count(), 1);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn single_node_is_centred() {
        let net = Network::new("one", vec![Node::junction("only", 1.0)], vec![]).unwrap();
        let svg = render_svg(&net, &[], &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<circle ").count(), 1);
        assert!(svg.contains(r#"cx="400.00" cy="300.00""#));
    }

    #[test]
    fn coordinates_are_flipped_and_escaped() {
        let nodes = vec![
            Node::junction("a<1>", 0.0).with_coord(0.0, 0.0),
            Node::junction("b", 0.0).with_coord(10.0, 10.0),
        ];
        let net = Network::new("x & y", nodes, vec![]).unwrap();
        let spec = RenderSpec { width: 120.0, height: 120.0, margin: 10.0, coverage_radius: Some(5.0), ..Default::default() };
        let svg = render_svg(&net, &["b".into()], &spec).unwrap();
        assert!(svg.contains("<title>x &amp; y</title>"));
        assert!(svg.contains("a&lt;1&gt;"));
        // b is north-east, so it lands top-right
        assert!(svg.contains(r#"class="sensor" cx="110.00" cy="10.00""#));
        assert!(svg.contains(r#"r="50.00""#));
        assert!(render_svg(&net, &["zz".into()], &spec).is_err());
        assert!(render_svg(&net, &[], &RenderSpec { width: 0.0, ..spec }).is_err());
    }
}
