//! CSV report tables and their readers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a table back yields bit-identical values.

use anyhow::{anyhow, bail, Context, Result};
use csv::{ReaderBuilder, StringRecord, WriterBuilder};
use wdn_core::metrics::{MetricSummary, NodeWeightTable};
use wdn_core::optimizer::{Baseline, ParetoRecord};

pub const METRICS_HEADER: [&str; 15] = [
    "network",
    "N",
    "L",
    "pipes",
    "k_max",
    "mean_degree",
    "mean_path_length",
    "clustering",
    "diameter",
    "critical_fraction",
    "fc_mode",
    "fc_degenerate",
    "betweenness",
    "closeness",
    "connected",
];
pub const WEIGHTS_HEADER: [&str; 7] = ["node_id", "kind", "demand", "g", "f", "f_norm", "flags"];
pub const PARETO_HEADER: [&str; 6] = ["w_low", "w_high", "F", "F1", "F2", "sensors"];
pub const BASELINE_HEADER: [&str; 5] = ["metric", "F", "F1", "F2", "sensors"];
pub const DISPERSION_HEADER: [&str; 5] = ["w_low", "w_high", "sensors", "dispersion", "component_means"];
pub const FREQUENT_HEADER: [&str; 2] = ["node_id", "records"];
pub const SCENARIOS_HEADER: [&str; 5] = ["index", "start_s", "duration_s", "coverable_sources", "covering_entries"];
pub const SENSOR_COVERAGE_HEADER: [&str; 2] = ["node_id", "pairs_covered"];

fn write_table<R: AsRef<[String]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.as_ref()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn read_table(text: &str, header: &[&str]) -> Result<Vec<StringRecord>> {
    let mut r = ReaderBuilder::new().from_reader(text.as_bytes());
    let found = r.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        bail!("unexpected header {:?}, wanted {:?}", found.iter().collect::<Vec<_>>(), header);
    }
    Ok(r.records().collect::<Result<_, _>>()?)
}

fn field<'r>(rec: &'r StringRecord, i: usize) -> Result<&'r str> {
    rec.get(i).ok_or_else(|| anyhow!("line {}: missing column {i}", line_of(rec)))
}

fn num<T: std::str::FromStr>(rec: &StringRecord, i: usize) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    field(rec, i)?
        .parse()
        .with_context(|| format!("line {}: column {i}", line_of(rec)))
}

fn line_of(rec: &StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn sensors(rec: &StringRecord, i: usize) -> Result<Vec<String>> {
    Ok(field(rec, i)?.split_whitespace().map(str::to_owned).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub network: String,
    pub node_count: usize,
    pub link_count: usize,
    pub pipe_count: usize,
    pub k_max: usize,
    pub mean_degree: f64,
    pub mean_path_length: f64,
    pub clustering: f64,
    pub diameter: u32,
    pub critical_fraction: f64,
    pub fc_mode: String,
    pub fc_degenerate: bool,
    pub betweenness: f64,
    pub closeness: f64,
    pub connected: bool,
}

impl MetricsRow {
    pub fn new(network: &str, m: &MetricSummary) -> Self {
        MetricsRow {
            network: network.to_owned(),
            node_count: m.node_count,
            link_count: m.link_count,
            pipe_count: m.pipe_count,
            k_max: m.k_max,
            mean_degree: m.mean_degree,
            mean_path_length: m.mean_path_length,
            clustering: m.clustering_avg,
            diameter: m.diameter,
            critical_fraction: m.critical_fraction.value,
            fc_mode: m.critical_fraction.mode.name().to_owned(),
            fc_degenerate: m.critical_fraction.degenerate,
            betweenness: m.betweenness_mean,
            closeness: m.closeness_mean,
            connected: m.connected,
        }
    }
}

pub fn write_metrics(rows: &[MetricsRow]) -> String {
    write_table(
        &METRICS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.network.clone(),
                r.node_count.to_string(),
                r.link_count.to_string(),
                r.pipe_count.to_string(),
                r.k_max.to_string(),
                r.mean_degree.to_string(),
                r.mean_path_length.to_string(),
                r.clustering.to_string(),
                r.diameter.to_string(),
                r.critical_fraction.to_string(),
                r.fc_mode.clone(),
                r.fc_degenerate.to_string(),
                r.betweenness.to_string(),
                r.closeness.to_string(),
                r.connected.to_string(),
            ]
        }),
    )
}

pub fn read_metrics(text: &str) -> Result<Vec<MetricsRow>> {
    read_table(text, &METRICS_HEADER)?
        .iter()
        .map(|r| {
            Ok(MetricsRow {
                network: field(r, 0)?.to_owned(),
                node_count: num(r, 1)?,
                link_count: num(r, 2)?,
                pipe_count: num(r, 3)?,
                k_max: num(r, 4)?,
                mean_degree: num(r, 5)?,
                mean_path_length: num(r, 6)?,
                clustering: num(r, 7)?,
                diameter: num(r, 8)?,
                critical_fraction: num(r, 9)?,
                fc_mode: field(r, 10)?.to_owned(),
                fc_degenerate: num(r, 11)?,
                betweenness: num(r, 12)?,
                closeness: num(r, 13)?,
                connected: num(r, 14)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub node_id: String,
    pub kind: String,
    pub demand: f64,
    pub g: f64,
    pub f: f64,
    pub f_norm: f64,
    /// `|`-separated markers: `storage`, `zero-capacity`, `no-demand`.
    pub flags: String,
}

pub fn weight_rows(table: &NodeWeightTable) -> Vec<WeightRow> {
    table
        .rows
        .iter()
        .map(|w| {
            let mut flags = Vec::new();
            if w.is_storage_convention() {
                flags.push("storage");
            }
            if w.zero_capacity {
                flags.push("zero-capacity");
            }
            if table.no_positive_demand && !w.is_storage_convention() {
                flags.push("no-demand");
            }
            WeightRow {
                node_id: w.id.to_string(),
                kind: w.kind.as_str().to_owned(),
                demand: w.demand,
                g: w.g,
                f: w.f,
                f_norm: w.f_norm,
                flags: flags.join("|"),
            }
        })
        .collect()
}

pub fn write_weights(rows: &[WeightRow]) -> String {
    write_table(
        &WEIGHTS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.node_id.clone(),
                r.kind.clone(),
                r.demand.to_string(),
                r.g.to_string(),
                r.f.to_string(),
                r.f_norm.to_string(),
                r.flags.clone(),
            ]
        }),
    )
}

pub fn read_weights(text: &str) -> Result<Vec<WeightRow>> {
    read_table(text, &WEIGHTS_HEADER)?
        .iter()
        .map(|r| {
            Ok(WeightRow {
                node_id: field(r, 0)?.to_owned(),
                kind: field(r, 1)?.to_owned(),
                demand: num(r, 2)?,
                g: num(r, 3)?,
                f: num(r, 4)?,
                f_norm: num(r, 5)?,
                flags: field(r, 6)?.to_owned(),
            })
        })
        .collect()
}

/// One Pareto table line. `f2` carries the reported (negated) sign.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRow {
    pub w_low: f64,
    pub w_high: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub sensors: Vec<String>,
}

impl From<&ParetoRecord> for ParetoRow {
    fn from(r: &ParetoRecord) -> Self {
        ParetoRow {
            w_low: r.w_low,
            w_high: r.w_high,
            f: r.values.scalar,
            f1: r.values.f1,
            f2: r.values.f2_reported,
            sensors: r.placement.ids().iter().map(|i| i.to_string()).collect(),
        }
    }
}

pub fn write_pareto(rows: &[ParetoRow]) -> String {
    write_table(
        &PARETO_HEADER,
        rows.iter().map(|r| {
            vec![
                r.w_low.to_string(),
                r.w_high.to_string(),
                r.f.to_string(),
                r.f1.to_string(),
                r.f2.to_string(),
                r.sensors.join(" "),
            ]
        }),
    )
}

pub fn read_pareto(text: &str) -> Result<Vec<ParetoRow>> {
    read_table(text, &PARETO_HEADER)?
        .iter()
        .map(|r| {
            Ok(ParetoRow {
                w_low: num(r, 0)?,
                w_high: num(r, 1)?,
                f: num(r, 2)?,
                f1: num(r, 3)?,
                f2: num(r, 4)?,
                sensors: sensors(r, 5)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub metric: String,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub sensors: Vec<String>,
}

impl From<&Baseline> for BaselineRow {
    fn from(b: &Baseline) -> Self {
        BaselineRow {
            metric: b.metric.to_string(),
            f: b.values.scalar,
            f1: b.values.f1,
            f2: b.values.f2_reported,
            sensors: b.placement.ids().iter().map(|i| i.to_string()).collect(),
        }
    }
}

pub fn write_baseline(rows: &[BaselineRow]) -> String {
    write_table(
        &BASELINE_HEADER,
        rows.iter().map(|r| {
            vec![
                r.metric.clone(),
                r.f.to_string(),
                r.f1.to_string(),
                r.f2.to_string(),
                r.sensors.join(" "),
            ]
        }),
    )
}

pub fn read_baseline(text: &str) -> Result<Vec<BaselineRow>> {
    read_table(text, &BASELINE_HEADER)?
        .iter()
        .map(|r| {
            Ok(BaselineRow {
                metric: field(r, 0)?.to_owned(),
                f: num(r, 1)?,
                f1: num(r, 2)?,
                f2: num(r, 3)?,
                sensors: sensors(r, 4)?,
            })
        })
        .collect()
}

/// Dispersion per Pareto record. `dispersion` is empty when the sensors
/// span several components; `component_means` then lists the mean within
/// each group of mutually reachable sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRow {
    pub w_low: f64,
    pub w_high: f64,
    pub sensors: Vec<String>,
    pub dispersion: Option<f64>,
    pub component_means: Vec<f64>,
}

pub fn write_dispersion(rows: &[DispersionRow]) -> String {
    write_table(
        &DISPERSION_HEADER,
        rows.iter().map(|r| {
            vec![
                r.w_low.to_string(),
                r.w_high.to_string(),
                r.sensors.join(" "),
                r.dispersion.map(|d| d.to_string()).unwrap_or_default(),
                r.component_means.iter().map(f64::to_string).collect::<Vec<_>>().join(" "),
            ]
        }),
    )
}

pub fn read_dispersion(text: &str) -> Result<Vec<DispersionRow>> {
    read_table(text, &DISPERSION_HEADER)?
        .iter()
        .map(|r| {
            let d = field(r, 3)?;
            Ok(DispersionRow {
                w_low: num(r, 0)?,
                w_high: num(r, 1)?,
                sensors: sensors(r, 2)?,
                dispersion: if d.is_empty() { None } else { Some(d.parse()?) },
                component_means: field(r, 4)?
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()?,
            })
        })
        .collect()
}

pub fn write_frequent(rows: &[(String, usize)]) -> String {
    write_table(&FREQUENT_HEADER, rows.iter().map(|(id, n)| vec![id.clone(), n.to_string()]))
}

pub fn read_frequent(text: &str) -> Result<Vec<(String, usize)>> {
    read_table(text, &FREQUENT_HEADER)?
        .iter()
        .map(|r| Ok((field(r, 0)?.to_owned(), num(r, 1)?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioRow {
    pub index: usize,
    pub start_s: u64,
    pub duration_s: u64,
    /// Sources detectable by at least one node within the coverage time.
    pub coverable_sources: usize,
    /// True (source, sensor) entries of the coverage relation.
    pub covering_entries: usize,
}

pub fn write_scenarios(rows: &[ScenarioRow]) -> String {
    write_table(
        &SCENARIOS_HEADER,
        rows.iter().map(|r| {
            vec![
                r.index.to_string(),
                r.start_s.to_string(),
                r.duration_s.to_string(),
                r.coverable_sources.to_string(),
                r.covering_entries.to_string(),
            ]
        }),
    )
}

pub fn read_scenarios(text: &str) -> Result<Vec<ScenarioRow>> {
    read_table(text, &SCENARIOS_HEADER)?
        .iter()
        .map(|r| {
            Ok(ScenarioRow {
                index: num(r, 0)?,
                start_s: num(r, 1)?,
                duration_s: num(r, 2)?,
                coverable_sources: num(r, 3)?,
                covering_entries: num(r, 4)?,
            })
        })
        .collect()
}

pub fn write_sensor_coverage(rows: &[(String, usize)]) -> String {
    write_table(&SENSOR_COVERAGE_HEADER, rows.iter().map(|(id, n)| vec![id.clone(), n.to_string()]))
}

pub fn read_sensor_coverage(text: &str) -> Result<Vec<(String, usize)>> {
    read_table(text, &SENSOR_COVERAGE_HEADER)?
        .iter()
        .map(|r| Ok((field(r, 0)?.to_owned(), num(r, 1)?)))
        .collect()
}
