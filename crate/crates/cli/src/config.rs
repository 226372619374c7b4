//! Run configuration: defaults, an optional TOML file, then command-line
//! overrides, in that order of increasing priority.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Deserialize;
use wdn_core::metrics::{AncMode, CriticalFractionMode, LogBase};
use wdn_core::network::{parse_inp, parse_native, Network};
use wdn_core::optimizer::{CandidatePolicy, SolverOptions, DEFAULT_GRID_STEP, DEFAULT_SENSORS};
use wdn_core::scenario::{
    TransportOptions, DEFAULT_COVERAGE_TIME_S, DEFAULT_DURATION_S, DEFAULT_HORIZON_S, DEFAULT_INTERVAL_S,
};

pub const OUT_DIR_ENV: &str = "WDN_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
pub enum LogBaseArg {
    #[default]
    #[value(name = "e")]
    #[serde(rename = "e")]
    E,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FcModeArg {
    #[default]
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidatesArg {
    #[default]
    All,
    Junctions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncModeArg {
    #[default]
    Component,
    Eccentricity,
}

/// Every field optional; used both for the TOML file and for flag overrides.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigLayer {
    pub net: Option<PathBuf>,
    pub hyd: Option<PathBuf>,
    pub horizon_s: Option<u64>,
    pub interval_s: Option<u64>,
    pub duration_s: Option<u64>,
    pub coverage_time_s: Option<u64>,
    pub p: Option<usize>,
    pub grid_step: Option<f64>,
    pub log_base: Option<LogBaseArg>,
    pub candidates: Option<CandidatesArg>,
    pub anc_mode: Option<AncModeArg>,
    pub fc_mode: Option<FcModeArg>,
    pub fc_trials: Option<usize>,
    pub seed: Option<u64>,
    pub exhaustive_threshold: Option<usize>,
    pub fixed_traversal_s: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Relative input paths in the file are taken relative to the file's
    /// directory; the output directory stays relative to the working directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut layer = Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for input in [&mut layer.net, &mut layer.hyd].into_iter().flatten() {
            if input.is_relative() {
                *input = base.join(&*input);
            }
        }
        Ok(layer)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            net: over.net.or(self.net),
            hyd: over.hyd.or(self.hyd),
            horizon_s: over.horizon_s.or(self.horizon_s),
            interval_s: over.interval_s.or(self.interval_s),
            duration_s: over.duration_s.or(self.duration_s),
            coverage_time_s: over.coverage_time_s.or(self.coverage_time_s),
            p: over.p.or(self.p),
            grid_step: over.grid_step.or(self.grid_step),
            log_base: over.log_base.or(self.log_base),
            candidates: over.candidates.or(self.candidates),
            anc_mode: over.anc_mode.or(self.anc_mode),
            fc_mode: over.fc_mode.or(self.fc_mode),
            fc_trials: over.fc_trials.or(self.fc_trials),
            seed: over.seed.or(self.seed),
            exhaustive_threshold: over.exhaustive_threshold.or(self.exhaustive_threshold),
            fixed_traversal_s: over.fixed_traversal_s.or(self.fixed_traversal_s),
            out: over.out.or(self.out),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub net: PathBuf,
    pub hyd: Option<PathBuf>,
    pub horizon_s: u64,
    pub interval_s: u64,
    pub duration_s: u64,
    pub coverage_time_s: u64,
    pub p: usize,
    pub grid_step: f64,
    pub log_base: LogBase,
    pub candidates: CandidatePolicy,
    pub anc_mode: AncMode,
    pub fc_mode: CriticalFractionMode,
    pub solver: SolverOptions,
    pub transport: TransportOptions,
    pub out: PathBuf,
}

pub const DEFAULT_FC_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 1;

impl RunConfig {
    /// `env_out` is the value of the output-directory environment variable,
    /// used when neither the file nor the flags name a directory.
    pub fn resolve(layer: ConfigLayer, env_out: Option<PathBuf>) -> Result<Self> {
        let Some(net) = layer.net else {
            bail!("no network file given (use --net or `net` in the config file)");
        };
        let positive = |name: &str, v: u64| -> Result<u64> {
            if v == 0 {
                bail!("{name} must be positive");
            }
            Ok(v)
        };
        let grid_step = layer.grid_step.unwrap_or(DEFAULT_GRID_STEP);
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            bail!("grid-step must lie in (0, 0.5], got {grid_step}");
        }
        let p = layer.p.unwrap_or(DEFAULT_SENSORS);
        if p == 0 {
            bail!("p must be positive");
        }
        let fixed_traversal_s = layer.fixed_traversal_s.unwrap_or(0.0);
        if !(fixed_traversal_s.is_finite() && fixed_traversal_s >= 0.0) {
            bail!("fixed-traversal-s must be a non-negative number");
        }
        let fc_trials = positive("fc-trials", layer.fc_trials.unwrap_or(DEFAULT_FC_TRIALS) as u64)? as usize;
        let seed = layer.seed.unwrap_or(DEFAULT_SEED);
        Ok(RunConfig {
            net,
            hyd: layer.hyd,
            horizon_s: positive("horizon-s", layer.horizon_s.unwrap_or(DEFAULT_HORIZON_S))?,
            interval_s: positive("interval-s", layer.interval_s.unwrap_or(DEFAULT_INTERVAL_S))?,
            duration_s: positive("duration-s", layer.duration_s.unwrap_or(DEFAULT_DURATION_S))?,
            coverage_time_s: positive("coverage-time-s", layer.coverage_time_s.unwrap_or(DEFAULT_COVERAGE_TIME_S))?,
            p,
            grid_step,
            log_base: match layer.log_base.unwrap_or_default() {
                LogBaseArg::E => LogBase::Natural,
                LogBaseArg::Two => LogBase::Two,
            },
            candidates: match layer.candidates.unwrap_or_default() {
                CandidatesArg::All => CandidatePolicy::AllNodes,
                CandidatesArg::Junctions => CandidatePolicy::JunctionsOnly,
            },
            anc_mode: match layer.anc_mode.unwrap_or_default() {
                AncModeArg::Component => AncMode::Component,
                AncModeArg::Eccentricity => AncMode::Eccentricity,
            },
            fc_mode: match layer.fc_mode.unwrap_or_default() {
                FcModeArg::Analytic => CriticalFractionMode::Analytic,
                FcModeArg::Empirical => CriticalFractionMode::empirical(fc_trials, seed),
            },
            solver: SolverOptions {
                exhaustive_threshold: layer
                    .exhaustive_threshold
                    .unwrap_or(SolverOptions::default().exhaustive_threshold),
            },
            transport: TransportOptions { fixed_traversal_s },
            out: layer.out.or(env_out).unwrap_or_else(|| PathBuf::from("out")),
        })
    }

    pub fn load_network(&self) -> Result<Network> {
        load_network(&self.net)
    }

    pub fn hydraulics_path(&self) -> Result<&Path> {
        match &self.hyd {
            Some(p) => Ok(p),
            None => bail!("this command needs hydraulic results (use --hyd or `hyd` in the config file)"),
        }
    }
}

/// Reads a network in either the native text format or INP format,
/// chosen by the `wdn-net` header.
pub fn load_network(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).with_context(|| format!("reading network {}", path.display()))?;
    let net = if text.trim_start().starts_with("wdn-net") {
        parse_native(&text)
    } else {
        parse_inp(&text)
    };
    net.with_context(|| format!("parsing network {}", path.display()))
}
