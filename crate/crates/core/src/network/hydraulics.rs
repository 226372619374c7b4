//! Ingestion of externally simulated hydraulic results.
//!
//! Two layouts are accepted, comma or tab separated:
//!
//! * long: header contains `link_id,time_s,velocity_ftps,flow_sign`, one row
//!   per (link, time). Extra columns (start node, length, diameter, ...) are
//!   ignored and may hold `#N/A`.
//! * wide: header contains `link_id` and one `v_<time_s>` column per time step
//!   holding a signed velocity whose sign gives the flow direction relative
//!   to the link's from→to orientation.

use std::collections::BTreeMap;

use super::{Network, NetworkError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowSign {
    Reverse,
    Zero,
    Forward,
}

impl FlowSign {
    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(FlowSign::Reverse),
            0 => Some(FlowSign::Zero),
            1 => Some(FlowSign::Forward),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            FlowSign::Reverse => -1,
            FlowSign::Zero => 0,
            FlowSign::Forward => 1,
        }
    }
}

/// Velocity magnitude (ft/s) and direction of one link at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkState {
    pub velocity: f64,
    pub sign: FlowSign,
}

impl LinkState {
    pub const STILL: LinkState = LinkState {
        velocity: 0.0,
        sign: FlowSign::Zero,
    };

    pub fn new(velocity: f64, sign: FlowSign) -> Option<Self> {
        let consistent = velocity.is_finite()
            && velocity >= 0.0
            && ((velocity == 0.0) == (sign == FlowSign::Zero));
        consistent.then_some(LinkState { velocity, sign })
    }

    /// From a signed velocity: the sign becomes the flow direction.
    pub fn from_signed(v: f64) -> Option<Self> {
        let sign = if v > 0.0 {
            FlowSign::Forward
        } else if v < 0.0 {
            FlowSign::Reverse
        } else {
            FlowSign::Zero
        };
        LinkState::new(v.abs(), sign)
    }
}

/// Link states at one instant, indexed like `Network::links`.
#[derive(Debug, Clone, PartialEq)]
pub struct HydraulicSnapshot {
    pub time_s: u64,
    pub links: Vec<LinkState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydraulicSeries {
    snapshots: Vec<HydraulicSnapshot>,
}

impl HydraulicSeries {
    /// Checks strictly increasing times and uniform coverage of `net`'s links.
    pub fn new(net: &Network, snapshots: Vec<HydraulicSnapshot>) -> Result<Self, NetworkError> {
        for pair in snapshots.windows(2) {
            if pair[1].time_s <= pair[0].time_s {
                return Err(NetworkError::NonmonotoneTime(pair[1].time_s));
            }
        }
        for snap in &snapshots {
            if snap.links.len() != net.link_count() {
                let missing = net.links().get(snap.links.len()).map(|l| l.id.clone()).unwrap_or_default();
                return Err(NetworkError::MissingLink {
                    link: missing,
                    time_s: snap.time_s,
                });
            }
        }
        Ok(HydraulicSeries { snapshots })
    }

    /// A single snapshot at t = 0.
    pub fn steady(net: &Network, links: Vec<LinkState>) -> Result<Self, NetworkError> {
        Self::new(net, vec![HydraulicSnapshot { time_s: 0, links }])
    }

    pub fn snapshots(&self) -> &[HydraulicSnapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Index of the latest snapshot at or before `time_s`.
    pub fn index_at(&self, time_s: u64) -> Option<usize> {
        let after = self.snapshots.partition_point(|s| s.time_s <= time_s);
        after.checked_sub(1)
    }
}

fn table_err(line: usize, reason: impl Into<String>) -> NetworkError {
    NetworkError::MalformedTable {
        line,
        reason: reason.into(),
    }
}

fn parse_time(line: usize, raw: &str) -> Result<u64, NetworkError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| table_err(line, format!("time {raw:?} is not a number")))?;
    if !(v.is_finite() && v >= 0.0 && v.fract() == 0.0) {
        return Err(table_err(line, format!("time {raw:?} must be a whole number of seconds")));
    }
    Ok(v as u64)
}

pub fn ingest_hydraulics(text: &str, net: &Network) -> Result<HydraulicSeries, NetworkError> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let delimiter = if !first.contains(',') && first.contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| table_err(1, e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let link_col = col("link_id").ok_or_else(|| table_err(1, "header lacks link_id"))?;

    // time -> per-link state (None until seen)
    let mut grid: BTreeMap<u64, Vec<Option<LinkState>>> = BTreeMap::new();
    let mut record = |line: usize, time: u64, link: &str, state: LinkState| -> Result<(), NetworkError> {
        let l = net
            .link_index(link)
            .ok_or_else(|| NetworkError::UnknownLink(link.to_string()))?;
        let slot = &mut grid.entry(time).or_insert_with(|| vec![None; net.link_count()])[l];
        if slot.is_some() {
            return Err(table_err(line, format!("duplicate entry for {link} at t={time}")));
        }
        *slot = Some(state);
        Ok(())
    };

    let wide: Vec<(usize, u64)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.strip_prefix("v_").map(|t| (i, t)))
        .map(|(i, t)| parse_time(1, t).map(|t| (i, t)))
        .collect::<Result<_, _>>()?;

    if let (Some(time_col), Some(vel_col), Some(sign_col)) = (col("time_s"), col("velocity_ftps"), col("flow_sign")) {
        let mut last_time: Option<u64> = None;
        for (n, row) in reader.records().enumerate() {
            let line = n + 2;
            let row = row.map_err(|e| table_err(line, e.to_string()))?;
            let time = parse_time(line, &row[time_col])?;
            if last_time.is_some_and(|t| time < t) {
                return Err(NetworkError::NonmonotoneTime(time));
            }
            last_time = Some(time);
            let velocity: f64 = row[vel_col]
                .parse()
                .map_err(|_| table_err(line, format!("velocity {:?} is not a number", &row[vel_col])))?;
            let sign = row[sign_col]
                .parse::<i8>()
                .ok()
                .and_then(FlowSign::from_i8)
                .ok_or_else(|| table_err(line, format!("flow_sign {:?} must be -1, 0 or 1", &row[sign_col])))?;
            let state = LinkState::new(velocity, sign).ok_or_else(|| {
                table_err(line, "velocity must be >= 0 and zero exactly when flow_sign is 0")
            })?;
            record(line, time, &row[link_col], state)?;
        }
    } else if !wide.is_empty() {
        for pair in wide.windows(2) {
            if pair[1].1 <= pair[0].1 {
                return Err(NetworkError::NonmonotoneTime(pair[1].1));
            }
        }
        for (n, row) in reader.records().enumerate() {
            let line = n + 2;
            let row = row.map_err(|e| table_err(line, e.to_string()))?;
            for &(c, time) in &wide {
                let v: f64 = row[c]
                    .parse()
                    .map_err(|_| table_err(line, format!("velocity {:?} is not a number", &row[c])))?;
                let state = LinkState::from_signed(v).ok_or_else(|| table_err(line, "velocity must be finite"))?;
                record(line, time, &row[link_col], state)?;
            }
        }
    } else {
        return Err(table_err(
            1,
            "header needs time_s, velocity_ftps and flow_sign, or v_<time> columns",
        ));
    }

    let mut snapshots = Vec::with_capacity(grid.len());
    for (time, states) in grid {
        let links = states
            .into_iter()
            .enumerate()
            .map(|(l, s)| {
                s.ok_or_else(|| NetworkError::MissingLink {
                    link: net.links()[l].id.clone(),
                    time_s: time,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        snapshots.push(HydraulicSnapshot { time_s: time, links });
    }
    if snapshots.is_empty() && net.link_count() > 0 {
        return Err(NetworkError::MissingLink {
            link: net.links()[0].id.clone(),
            time_s: 0,
        });
    }
    HydraulicSeries::new(net, snapshots)
}

/// Serializes a series in the long layout accepted by [`ingest_hydraulics`].
pub fn serialize_hydraulics(series: &HydraulicSeries, net: &Network) -> String {
    let mut out = String::from("link_id,time_s,velocity_ftps,flow_sign\n");
    for snap in series.snapshots() {
        for (link, state) in net.links().iter().zip(&snap.links) {
            out.push_str(&format!("{},{},{:?},{}\n", link.id, snap.time_s, state.velocity, state.sign.as_i8()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Link, Node};

    fn sample_net() -> Network {
        let nodes = ["5", "6", "7", "8", "105", "106"].iter().map(|id| Node::junction(*id, 0.0)).collect();
        let links = vec![
            Link::pipe("LINK-7", "5", "6", 238.0, 7.999912),
            Link::pipe("LINK-8", "6", "7", 502.0, 8.0),
            Link::pipe("LINK-9", "8", "6", 396.0, 7.999894),
            Link::pump("PUMP-170", "105", "106"),
        ];
        Network::new("sample", nodes, links).unwrap()
    }

    #[test]
    fn long_layout_with_na_columns() {
        let text = "\
link_id,start,end,length_ft,diameter_in,time_s,velocity_ftps,flow_sign
LINK-7,5,6,238,7.999912,0,0.49,1
LINK-8,6,7,502,8,0,0,0
LINK-9,8,6,396,7.999894,0,0.51,-1
PUMP-170,105,106,#N/A,#N/A,0,0,0
";
        let series = ingest_hydraulics(text, &sample_net()).unwrap();
        assert_eq!(series.len(), 1);
        let snap = &series.snapshots()[0];
        assert_eq!(snap.links[1], LinkState { velocity: 0.0, sign: FlowSign::Zero });
        assert_eq!(snap.links[2].sign, FlowSign::Reverse);
    }

    #[test]
    fn tab_separated_wide_layout() {
        let text = "link_id\tv_0\tv_300\nLINK-7\t0.49\t-0.2\nLINK-8\t0\t0\nLINK-9\t0.51\t0.5\nPUMP-170\t0\t1.5\n";
        let series = ingest_hydraulics(text, &sample_net()).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.snapshots()[1].time_s, 300);
        assert_eq!(series.snapshots()[1].links[0], LinkState { velocity: 0.2, sign: FlowSign::Reverse });
    }

    #[test]
    fn missing_and_unknown_links() {
        let net = sample_net();
        let missing = "link_id,time_s,velocity_ftps,flow_sign\nLINK-7,0,1,1\nLINK-8,0,1,1\nLINK-9,0,1,1\n";
        assert!(matches!(
            ingest_hydraulics(missing, &net),
            Err(NetworkError::MissingLink { link, .. }) if link == "PUMP-170"
        ));
        let unknown = "link_id,time_s,velocity_ftps,flow_sign\nLINK-99,0,1,1\n";
        assert_eq!(ingest_hydraulics(unknown, &net).unwrap_err(), NetworkError::UnknownLink("LINK-99".into()));
    }

    #[test]
    fn nonmonotone_time() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 0.0)];
        let net = Network::new("n", nodes, vec![Link::pipe("p", "a", "b", 1.0, 1.0)]).unwrap();
        let text = "link_id,time_s,velocity_ftps,flow_sign\np,300,1,1\np,0,1,1\n";
        assert_eq!(ingest_hydraulics(text, &net).unwrap_err(), NetworkError::NonmonotoneTime(0));
        let wide = "link_id,v_300,v_0\np,1,1\n";
        assert_eq!(ingest_hydraulics(wide, &net).unwrap_err(), NetworkError::NonmonotoneTime(0));
    }

    #[test]
    fn two_snapshots_one_pipe() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 0.0)];
        let net = Network::new("n", nodes, vec![Link::pipe("p", "a", "b", 1.0, 1.0)]).unwrap();
        let text = "link_id,time_s,velocity_ftps,flow_sign\np,0,1,1\np,300,2,-1\n";
        let series = ingest_hydraulics(text, &net).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.index_at(0), Some(0));
        assert_eq!(series.index_at(299), Some(0));
        assert_eq!(series.index_at(300), Some(1));
        assert_eq!(ingest_hydraulics(&serialize_hydraulics(&series, &net), &net).unwrap(), series);
    }

    #[test]
    fn inconsistent_sign_rejected() {
        let nodes = vec![Node::junction("a", 0.0), Node::junction("b", 0.0)];
        let net = Network::new("n", nodes, vec![Link::pipe("p", "a", "b", 1.0, 1.0)]).unwrap();
        for row in ["p,0,0,1", "p,0,1,0", "p,0,-1,1", "p,0,1,2", "p,0.5,1,1"] {
            let text = format!("link_id,time_s,velocity_ftps,flow_sign\n{row}\n");
            assert!(matches!(ingest_hydraulics(&text, &net), Err(NetworkError::MalformedTable { .. })), "{row}");
        }
    }
}
