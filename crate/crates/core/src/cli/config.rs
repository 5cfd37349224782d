//! Experiment configuration: built-in defaults, an optional TOML file and
//! command-line flags, merged in that order of increasing precedence.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CliError;
use crate::bounds::SearchBox;
use crate::objectives::{lookup_objective, Dimensionality, Objective};
use crate::search::{BasConfig, Init, ScheduleSpec};

/// Which trials get a trajectory file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajMode {
    All,
    First,
    None,
}

impl fmt::Display for TrajMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrajMode::All => "all",
            TrajMode::First => "first",
            TrajMode::None => "none",
        })
    }
}

/// One layer of settings. Flags and config files share this shape; keys in
/// a file are the flag names without the leading dashes.
#[derive(Debug, Clone, Default, PartialEq, clap::Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigLayer {
    /// Objective name: michalewicz, goldstein_price or sphere
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    /// Search-space dimension
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Iterations per trial
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    /// Initial antenna length
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
    /// Initial step size
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    /// Antenna-length decay rate
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_d: Option<f64>,
    /// Antenna-length additive offset
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset_d: Option<f64>,
    /// Step-size decay rate
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_delta: Option<f64>,
    /// Number of independent trials
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Master seed; per-trial seeds derive from it
    #[arg(long)]
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_seed",
        deserialize_with = "de_seed"
    )]
    pub seed: Option<u64>,
    /// Initial sampling box, `lo:hi[,lo:hi...]`
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_box: Option<String>,
    /// Clamp iterates into the initial box
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamp: Option<bool>,
    /// Stop a trial once its best value reaches this
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    /// Stop a trial after this many iterations without improvement
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stall: Option<usize>,
    /// Output directory
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Which trajectories to write
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traj: Option<TrajMode>,
}

// TOML integers are signed 64-bit, so seeds above i64::MAX are written as strings.
fn ser_seed<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
    match seed {
        Some(v) if *v <= i64::MAX as u64 => s.serialize_i64(*v as i64),
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn de_seed<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(v) => u64::try_from(v)
            .map(Some)
            .map_err(|_| serde::de::Error::custom("seed must be non-negative")),
        Raw::Text(s) => s
            .parse()
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("`{s}` is not a u64 seed"))),
    }
}

impl ConfigLayer {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(&self, over: &ConfigLayer) -> ConfigLayer {
        macro_rules! pick {
            ($($f:ident),*) => { ConfigLayer { $($f: over.$f.clone().or_else(|| self.$f.clone()),)* } };
        }
        pick!(
            objective, dim, iters, d0, delta0, eta_d, offset_d, eta_delta, trials, seed, init_box,
            clamp, target, stall, out_dir, traj
        )
    }

    /// Reads a config file. A campaign summary is accepted too; its `[config]`
    /// table is used.
    pub fn from_file(path: &Path) -> Result<ConfigLayer, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| CliError::ConfigFile {
            path: path.to_path_buf(),
            message: e,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<ConfigLayer, String> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        let table = match table.get("config") {
            Some(toml::Value::Table(inner)) if table.contains_key("aggregate") => inner.clone(),
            _ => table,
        };
        table.try_into().map_err(|e: toml::de::Error| e.to_string())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config layer always serializes")
    }
}

/// A fully resolved and validated campaign configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub objective: String,
    pub dim: usize,
    pub iters: usize,
    pub d0: f64,
    pub delta0: f64,
    pub eta_d: f64,
    pub offset_d: f64,
    pub eta_delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub init_box: SearchBox,
    pub clamp: bool,
    pub target: Option<f64>,
    pub stall: Option<usize>,
    pub out_dir: PathBuf,
    pub traj: TrajMode,
}

fn invalid(field: &str, reason: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(field, format!("must be > 0, got {v}")))
    }
}

impl ExperimentConfig {
    /// Applies built-in defaults under `layer` and validates the result.
    pub fn from_layer(layer: &ConfigLayer) -> Result<Self, CliError> {
        let objective_name = layer
            .objective
            .clone()
            .ok_or_else(|| invalid("objective", "is required"))?;
        // Validates the name before the dimension is known.
        let probe = lookup_objective(&objective_name, 2)
            .or_else(|_| lookup_objective(&objective_name, 1))
            .map_err(|e| invalid("objective", e.to_string()))?;
        let dim = match (layer.dim, probe.dimensionality()) {
            (Some(d), _) => d,
            (None, Dimensionality::Fixed(d)) => d,
            (None, Dimensionality::Flexible) => 2,
        };
        let objective =
            lookup_objective(&objective_name, dim).map_err(|e| invalid("dim", e.to_string()))?;

        let d0 = positive("d0", layer.d0.unwrap_or(2.0))?;
        let delta0 = positive("delta0", layer.delta0.unwrap_or(0.5))?;
        let eta_d = layer.eta_d.unwrap_or(ScheduleSpec::DEFAULT_RATE);
        let offset_d = layer.offset_d.unwrap_or(ScheduleSpec::DEFAULT_OFFSET);
        let eta_delta = layer.eta_delta.unwrap_or(ScheduleSpec::DEFAULT_RATE);
        for (field, rate) in [("eta-d", eta_d), ("eta-delta", eta_delta)] {
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(invalid(field, format!("must lie in (0, 1], got {rate}")));
            }
        }
        if !(offset_d.is_finite() && offset_d >= 0.0) {
            return Err(invalid("offset-d", format!("must be >= 0, got {offset_d}")));
        }

        let iters = layer.iters.unwrap_or(100);
        if iters == 0 {
            return Err(invalid("iters", "must be >= 1"));
        }
        let trials = layer.trials.unwrap_or(1);
        if trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        let init_box = match &layer.init_box {
            Some(text) => {
                let b: SearchBox = text
                    .parse()
                    .map_err(|e: crate::BasError| invalid("init-box", e.to_string()))?;
                b.ensure_dimension(dim)
                    .map_err(|e| invalid("init-box", e.to_string()))?;
                b
            }
            None => objective.default_init_box().clone(),
        };
        if let Some(t) = layer.target {
            if !t.is_finite() {
                return Err(invalid("target", "must be finite"));
            }
        }
        if layer.stall == Some(0) {
            return Err(invalid("stall", "must be >= 1"));
        }

        Ok(ExperimentConfig {
            objective: objective_name,
            dim,
            iters,
            d0,
            delta0,
            eta_d,
            offset_d,
            eta_delta,
            trials,
            seed: layer.seed.unwrap_or(0),
            init_box,
            clamp: layer.clamp.unwrap_or(false),
            target: layer.target,
            stall: layer.stall,
            out_dir: layer
                .out_dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("bas-out")),
            traj: layer.traj.unwrap_or(TrajMode::First),
        })
    }

    pub fn objective(&self) -> Objective {
        lookup_objective(&self.objective, self.dim).expect("validated at construction")
    }

    /// Optimizer settings for one trial.
    pub fn bas_config(&self, seed: u64) -> BasConfig {
        let mut cfg = BasConfig::new(self.dim, Init::Uniform(self.init_box.clone()));
        cfg.d0 = self.d0;
        cfg.delta0 = self.delta0;
        cfg.d_schedule = ScheduleSpec::from_rate_offset(self.eta_d, self.offset_d)
            .expect("validated at construction");
        cfg.delta_schedule =
            ScheduleSpec::from_rate_offset(self.eta_delta, 0.0).expect("validated at construction");
        cfg.max_iters = self.iters;
        cfg.seed = seed;
        cfg.clamp_box = self.clamp.then(|| self.init_box.clone());
        cfg.target_value = self.target;
        cfg.stall_iters = self.stall;
        cfg
    }

    /// Every setting that affects results, with defaults filled in. The output
    /// directory is left out so that identical campaigns echo identically.
    pub fn echo(&self) -> ConfigLayer {
        ConfigLayer {
            objective: Some(self.objective.clone()),
            dim: Some(self.dim),
            iters: Some(self.iters),
            d0: Some(self.d0),
            delta0: Some(self.delta0),
            eta_d: Some(self.eta_d),
            offset_d: Some(self.offset_d),
            eta_delta: Some(self.eta_delta),
            trials: Some(self.trials),
            seed: Some(self.seed),
            init_box: Some(self.init_box.to_string()),
            clamp: Some(self.clamp),
            target: self.target,
            stall: self.stall,
            out_dir: None,
            traj: Some(self.traj),
        }
    }
}

/// Merges defaults, the optional config file and the flags (flags win).
pub fn parse_config(
    flags: &ConfigLayer,
    file: Option<&Path>,
) -> Result<ExperimentConfig, CliError> {
    let base = match file {
        Some(path) => ConfigLayer::from_file(path)?,
        None => ConfigLayer::default(),
    };
    ExperimentConfig::from_layer(&base.overlay(flags))
}
