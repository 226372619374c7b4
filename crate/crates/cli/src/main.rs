use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use wdn_cli::commands;
use wdn_cli::config::{
    AncModeArg, CandidatesArg, ConfigLayer, FcModeArg, LogBaseArg, RunConfig, OUT_DIR_ENV,
};
use wdn_cli::render::RenderSpec;
use wdn_core::network::NodeId;
use wdn_core::optimizer::CentralityMetric;

/// Sensor placement for contamination warning in water distribution networks.
///
/// Settings come from built-in defaults, then the optional --config TOML file
/// (keys named like the long flags, e.g. `coverage-time-s = 7200`), then flags.
#[derive(Debug, Parser)]
#[command(name = "wdn", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML file with run settings; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Network description (native `wdn-net v1` text or INP)
    #[arg(long, global = true)]
    net: Option<PathBuf>,
    /// Hydraulic results table (link velocities and flow signs over time)
    #[arg(long, global = true)]
    hyd: Option<PathBuf>,
    /// Number of sensors [default: 5]
    #[arg(long = "p", global = true)]
    p: Option<usize>,
    /// Longest acceptable detection delay T in seconds [default: 7200]
    #[arg(long, global = true)]
    coverage_time_s: Option<u64>,
    /// Spacing of scenario start times in seconds [default: 300]
    #[arg(long, global = true)]
    interval_s: Option<u64>,
    /// Simulation horizon in seconds [default: 86400]
    #[arg(long, global = true)]
    horizon_s: Option<u64>,
    /// Injection duration in seconds [default: 7200]
    #[arg(long, global = true)]
    duration_s: Option<u64>,
    /// Weight grid step of the Pareto sweep [default: 0.05]
    #[arg(long, global = true)]
    grid_step: Option<f64>,
    /// Logarithm base of the capacity entropy [default: e]
    #[arg(long, value_enum, global = true)]
    log_base: Option<LogBaseArg>,
    /// Critical fraction estimate [default: analytic]
    #[arg(long, value_enum, global = true)]
    fc_mode: Option<FcModeArg>,
    /// Random-removal trials for --fc-mode empirical [default: 100]
    #[arg(long, global = true)]
    fc_trials: Option<usize>,
    /// Seed for randomised estimates [default: 1]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Which nodes may host a sensor [default: all]
    #[arg(long, value_enum, global = true)]
    candidates: Option<CandidatesArg>,
    /// Divisor of the average-node-coverage term [default: component]
    #[arg(long, value_enum, global = true)]
    anc_mode: Option<AncModeArg>,
    /// Enumerate all subsets when there are at most this many candidates [default: 12]
    #[arg(long, global = true)]
    exhaustive_threshold: Option<usize>,
    /// Travel time through a flowing pump or valve, in seconds [default: 0]
    #[arg(long, global = true)]
    fixed_traversal_s: Option<f64>,
    /// Output directory [default: $WDN_OUT_DIR, else ./out]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Network-level metrics and node weights
    Metrics,
    /// Demand-adjusted entropic degree per node
    Weights,
    /// Scenario list and detection coverage relation
    Scenarios,
    /// Pareto sweep of exact placements, dispersion and most frequent sensors
    Optimize,
    /// Placements by degree, betweenness or closeness ranking
    Baseline {
        /// Metrics to rank by; all three when omitted
        #[arg(long, value_delimiter = ',')]
        metric: Vec<String>,
        /// Weight at which F is reported
        #[arg(long, default_value_t = 0.0)]
        baseline_w: f64,
    },
    /// SVG drawing of the network and a placement
    Render {
        /// Sensor ids, comma separated; defaults to most_frequent.csv in the output directory
        #[arg(long, value_delimiter = ',')]
        sensors: Option<Vec<String>>,
        #[arg(long, default_value_t = 800.0)]
        width: f64,
        #[arg(long, default_value_t = 600.0)]
        height: f64,
        /// Coverage circle radius around each sensor, in network coordinate units
        #[arg(long)]
        coverage_radius: Option<f64>,
        #[arg(long, default_value = commands::SVG_FILE)]
        file: String,
    },
}

impl CommonArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            net: self.net.clone(),
            hyd: self.hyd.clone(),
            horizon_s: self.horizon_s,
            interval_s: self.interval_s,
            duration_s: self.duration_s,
            coverage_time_s: self.coverage_time_s,
            p: self.p,
            grid_step: self.grid_step,
            log_base: self.log_base,
            candidates: self.candidates,
            anc_mode: self.anc_mode,
            fc_mode: self.fc_mode,
            fc_trials: self.fc_trials,
            seed: self.seed,
            exhaustive_threshold: self.exhaustive_threshold,
            fixed_traversal_s: self.fixed_traversal_s,
            out: self.out.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.common.config {
        Some(path) => ConfigLayer::load(path)?,
        None => ConfigLayer::default(),
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let cfg = RunConfig::resolve(file.overlay(cli.common.layer()), env_out)?;

    let written = match cli.command {
        Command::Metrics => commands::cmd_metrics(&cfg)?,
        Command::Weights => commands::cmd_weights(&cfg)?,
        Command::Scenarios => commands::cmd_scenarios(&cfg)?,
        Command::Optimize => commands::cmd_optimize(&cfg)?,
        Command::Baseline { metric, baseline_w } => {
            let metrics = if metric.is_empty() {
                CentralityMetric::ALL.to_vec()
            } else {
                metric.iter().map(|m| m.parse()).collect::<Result<_, _>>()?
            };
            commands::cmd_baseline(&cfg, &metrics, baseline_w)?
        }
        Command::Render {
            sensors,
            width,
            height,
            coverage_radius,
            file,
        } => {
            let sensors = sensors
                .map(|ids| ids.into_iter().map(NodeId::new).collect::<Result<Vec<_>, _>>())
                .transpose()?;
            let spec = RenderSpec {
                width,
                height,
                coverage_radius,
                ..RenderSpec::default()
            };
            commands::cmd_render(&cfg, sensors, &spec, &file)?
        }
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
