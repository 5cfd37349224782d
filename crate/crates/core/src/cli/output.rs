use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::campaign::CampaignSummary;
use super::config::ConfigLayer;
use super::CliError;
use crate::search::RunResult;

pub const SUMMARY_FILE: &str = "summary.toml";

pub fn trajectory_path(dir: &Path, trial: usize) -> PathBuf {
    dir.join(format!("trajectory_{trial:04}.csv"))
}

pub fn summary_path(dir: &Path) -> PathBuf {
    dir.join(SUMMARY_FILE)
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `t,f_x,f_bst,d,delta,x_0,...,x_{k-1}`, one row per iteration.
/// Floats use the shortest representation that parses back to the same bits.
pub fn write_trajectory<W: Write>(result: &RunResult, mut w: W) -> std::io::Result<()> {
    let k = result.x0.len();
    write!(w, "t,f_x,f_bst,d,delta")?;
    for i in 0..k {
        write!(w, ",x_{i}")?;
    }
    writeln!(w)?;
    for r in &result.records {
        write!(
            w,
            "{},{:?},{:?},{:?},{:?}",
            r.t, r.f_x, r.f_bst, r.d, r.delta
        )?;
        for v in &r.x {
            write!(w, ",{v:?}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn emit_trajectory(result: &RunResult, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_error(path))?;
    write_trajectory(result, BufWriter::new(file)).map_err(io_error(path))
}

/// On-disk layout of a campaign summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub config: ConfigLayer,
    pub aggregate: AggregateDocument,
    pub trials: Vec<TrialDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateDocument {
    pub trials: usize,
    pub best: f64,
    pub best_trial: usize,
    pub median: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub total_evals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDocument {
    pub index: usize,
    /// Decimal string; u64 seeds do not all fit a TOML integer.
    pub seed: String,
    pub f_bst: f64,
    pub x_bst: Vec<f64>,
    pub evals: usize,
    pub iterations: usize,
    pub termination: String,
}

impl SummaryDocument {
    pub fn from_summary(summary: &CampaignSummary) -> Self {
        let a = &summary.aggregate;
        SummaryDocument {
            config: summary.config.echo(),
            aggregate: AggregateDocument {
                trials: summary.trials.len(),
                best: a.best,
                best_trial: a.best_trial,
                median: a.median,
                mean: a.mean,
                std_dev: a.std_dev,
                total_evals: summary.total_evals,
            },
            trials: summary
                .trials
                .iter()
                .map(|t| TrialDocument {
                    index: t.index,
                    seed: t.seed.to_string(),
                    f_bst: t.f_bst,
                    x_bst: t.x_bst.clone(),
                    evals: t.evals,
                    iterations: t.iterations,
                    termination: t.termination.as_str().to_string(),
                })
                .collect(),
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("summary always serializes")
    }

    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        Self::from_toml_str(&text).map_err(|e| CliError::ConfigFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

pub fn emit_summary(summary: &CampaignSummary, path: &Path) -> Result<(), CliError> {
    let text = SummaryDocument::from_summary(summary).to_toml_string();
    std::fs::write(path, text).map_err(io_error(path))
}
