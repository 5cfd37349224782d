//! Experiment harness behind the `bas` binary: configuration, seeded
//! multi-trial campaigns and their CSV/TOML artifacts.

mod campaign;
mod config;
mod output;

use std::path::PathBuf;

use thiserror::Error;

use crate::error::BasError;

pub use campaign::{
    execute_campaign, run_campaign, run_trial, trial_seed, Aggregate, CampaignSummary, TrialOutcome,
};
pub use config::{parse_config, ConfigLayer, ExperimentConfig, TrajMode};
pub use output::{
    emit_summary, emit_trajectory, summary_path, trajectory_path, write_trajectory,
    AggregateDocument, SummaryDocument, TrialDocument, SUMMARY_FILE,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{}: {message}", path.display())]
    ConfigFile { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: BasError },
}
