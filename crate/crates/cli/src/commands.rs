//! Subcommand implementations. Each writes its tables into the configured
//! output directory and returns the paths written.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::info;
use wdn_core::metrics::{anc_terms_with, demand_adjusted, metric_summary, shortest_paths, AncTermTable, NodeWeightTable};
use wdn_core::network::{ingest_hydraulics, Network, NodeId};
use wdn_core::optimizer::{
    centrality_baseline, dispersion, most_frequent, pareto_sweep, CentralityMetric, OptimizerError, PlacementProblem,
};
use wdn_core::scenario::{coverage_relation, coverage_stats, generate_scenarios, serialize_coverage, CoverageRelation};

use crate::config::RunConfig;
use crate::render::{render_svg, RenderSpec};
use crate::tables::{self, BaselineRow, DispersionRow, MetricsRow, ParetoRow, ScenarioRow};

pub const METRICS_FILE: &str = "metrics_summary.csv";
pub const WEIGHTS_FILE: &str = "node_weights.csv";
pub const SCENARIOS_FILE: &str = "scenarios.csv";
pub const COVERAGE_FILE: &str = "coverage.txt";
pub const SENSOR_COVERAGE_FILE: &str = "coverage_stats.csv";
pub const PARETO_FILE: &str = "pareto.csv";
pub const DISPERSION_FILE: &str = "pareto_dispersion.csv";
pub const FREQUENT_FILE: &str = "most_frequent.csv";
pub const BASELINE_FILE: &str = "baseline.csv";
pub const SVG_FILE: &str = "placement.svg";

fn write_out(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(path)
}

pub fn cmd_metrics(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let net = cfg.load_network()?;
    let summary = metric_summary(&net, cfg.fc_mode)?;
    let weights = demand_adjusted(&net, cfg.log_base);
    Ok(vec![
        write_out(&cfg.out, METRICS_FILE, &tables::write_metrics(&[MetricsRow::new(net.name(), &summary)]))?,
        write_out(&cfg.out, WEIGHTS_FILE, &tables::write_weights(&tables::weight_rows(&weights)))?,
    ])
}

pub fn cmd_weights(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let net = cfg.load_network()?;
    let weights = demand_adjusted(&net, cfg.log_base);
    Ok(vec![write_out(&cfg.out, WEIGHTS_FILE, &tables::write_weights(&tables::weight_rows(&weights)))?])
}

fn relation(cfg: &RunConfig, net: &Network) -> Result<CoverageRelation> {
    let path = cfg.hydraulics_path()?;
    let text = fs::read_to_string(path).with_context(|| format!("reading hydraulics {}", path.display()))?;
    let series = ingest_hydraulics(&text, net).with_context(|| format!("parsing hydraulics {}", path.display()))?;
    let set = generate_scenarios(cfg.horizon_s, cfg.interval_s, cfg.duration_s, cfg.coverage_time_s)?;
    info!(
        "{} scenarios, {} injection events",
        set.len(),
        set.event_count(net.node_count())
    );
    Ok(coverage_relation(net, &series, &set, cfg.transport)?)
}

pub fn cmd_scenarios(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let net = cfg.load_network()?;
    let rel = relation(cfg, &net)?;
    let set = generate_scenarios(cfg.horizon_s, cfg.interval_s, cfg.duration_s, cfg.coverage_time_s)?;
    let stats = coverage_stats(&rel);
    let rows: Vec<ScenarioRow> = set
        .scenarios
        .iter()
        .map(|s| ScenarioRow {
            index: s.index,
            start_s: s.start_s,
            duration_s: s.duration_s,
            coverable_sources: stats.coverable_sources[s.index],
            covering_entries: stats.entries_per_scenario[s.index],
        })
        .collect();
    let per_sensor: Vec<(String, usize)> = rel
        .node_ids()
        .iter()
        .map(NodeId::to_string)
        .zip(stats.pairs_per_sensor.iter().copied())
        .collect();
    Ok(vec![
        write_out(&cfg.out, SCENARIOS_FILE, &tables::write_scenarios(&rows))?,
        write_out(&cfg.out, COVERAGE_FILE, &serialize_coverage(&rel))?,
        write_out(&cfg.out, SENSOR_COVERAGE_FILE, &tables::write_sensor_coverage(&per_sensor))?,
    ])
}

/// Everything the placement solvers need, computed once.
pub struct Prepared {
    pub net: Network,
    pub rel: CoverageRelation,
    pub weights: NodeWeightTable,
    pub anc: AncTermTable,
}

impl Prepared {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let net = cfg.load_network()?;
        let rel = relation(cfg, &net)?;
        let weights = demand_adjusted(&net, cfg.log_base);
        let anc = anc_terms_with(&net, cfg.anc_mode);
        Ok(Prepared { net, rel, weights, anc })
    }

    pub fn problem(&self, cfg: &RunConfig) -> Result<PlacementProblem<'_>> {
        Ok(PlacementProblem::new(&self.rel, &self.weights, &self.anc, cfg.candidates)?)
    }
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let prep = Prepared::load(cfg)?;
    let problem = prep.problem(cfg)?;
    let records = pareto_sweep(&problem, cfg.p, cfg.grid_step, cfg.solver)?;
    info!("{} Pareto records", records.len());

    let dm = shortest_paths(&prep.net);
    let dispersion_rows = records
        .iter()
        .map(|r| {
            let (dispersion, component_means) = match dispersion(&r.placement, &dm) {
                Ok(d) => (Some(d), Vec::new()),
                Err(OptimizerError::DisconnectedPlacement { component_means }) => (None, component_means),
                Err(e) => return Err(e.into()),
            };
            Ok(DispersionRow {
                w_low: r.w_low,
                w_high: r.w_high,
                sensors: r.placement.ids().iter().map(NodeId::to_string).collect(),
                dispersion,
                component_means,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for r in &records {
        for id in r.placement.ids() {
            *counts.entry(id).or_default() += 1;
        }
    }
    let frequent: Vec<(String, usize)> = most_frequent(&records, cfg.p)
        .iter()
        .map(|id| (id.to_string(), counts[id]))
        .collect();

    let pareto: Vec<ParetoRow> = records.iter().map(ParetoRow::from).collect();
    Ok(vec![
        write_out(&cfg.out, PARETO_FILE, &tables::write_pareto(&pareto))?,
        write_out(&cfg.out, DISPERSION_FILE, &tables::write_dispersion(&dispersion_rows))?,
        write_out(&cfg.out, FREQUENT_FILE, &tables::write_frequent(&frequent))?,
    ])
}

/// `w` is the weight at which F is reported.
pub fn cmd_baseline(cfg: &RunConfig, metrics: &[CentralityMetric], w: f64) -> Result<Vec<PathBuf>> {
    let prep = Prepared::load(cfg)?;
    let problem = prep.problem(cfg)?;
    let rows = metrics
        .iter()
        .map(|&m| Ok(BaselineRow::from(&centrality_baseline(&problem, &prep.net, m, cfg.p, w)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![write_out(&cfg.out, BASELINE_FILE, &tables::write_baseline(&rows))?])
}

/// Draws `sensors`, or when none are given the most-frequent set from a
/// previous `optimize` run in the output directory, if present.
pub fn cmd_render(cfg: &RunConfig, sensors: Option<Vec<NodeId>>, spec: &RenderSpec, file: &str) -> Result<Vec<PathBuf>> {
    let net = cfg.load_network()?;
    let sensors = match sensors {
        Some(s) => s,
        None => {
            let path = cfg.out.join(FREQUENT_FILE);
            match fs::read_to_string(&path) {
                Ok(text) => tables::read_frequent(&text)
                    .with_context(|| format!("reading {}", path.display()))?
                    .into_iter()
                    .map(|(id, _)| NodeId::new(id))
                    .collect::<Result<_, _>>()?,
                Err(_) => Vec::new(),
            }
        }
    };
    let svg = render_svg(&net, &sensors, spec)?;
    Ok(vec![write_out(&cfg.out, file, &svg)?])
}
