use std::fs;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, TrajMode};
use super::output::{emit_summary, emit_trajectory, summary_path, trajectory_path};
use super::CliError;
use crate::search::{run, RunResult, Termination};

/// Seed for trial `index`: the first word of ChaCha8 stream `index` keyed by
/// the master seed. Depends on nothing but the pair, so trials can run in any order.
pub fn trial_seed(master_seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

pub fn run_trial(config: &ExperimentConfig, index: usize) -> Result<RunResult, CliError> {
    let objective = config.objective();
    let bas = config.bas_config(trial_seed(config.seed, index));
    run(&bas, |x| objective.evaluate(x)).map_err(|source| CliError::Trial {
        trial: index,
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub f_bst: f64,
    pub x_bst: Vec<f64>,
    pub evals: usize,
    pub iterations: usize,
    pub termination: Termination,
}

impl TrialOutcome {
    fn new(index: usize, seed: u64, result: &RunResult) -> Self {
        TrialOutcome {
            index,
            seed,
            f_bst: result.f_bst,
            x_bst: result.x_bst.clone(),
            evals: result.evals,
            iterations: result.records.len(),
            termination: result.termination,
        }
    }
}

/// Order statistics and moments of the per-trial best values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub best: f64,
    pub best_trial: usize,
    pub median: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
}

impl Aggregate {
    pub fn from_values(values: &[f64]) -> Aggregate {
        assert!(!values.is_empty(), "aggregate of an empty campaign");
        let n = values.len() as f64;
        let (best_trial, best) =
            values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, values[0]),
                    |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
                );
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Aggregate {
            best,
            best_trial,
            median,
            mean,
            std_dev: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialOutcome>,
    pub aggregate: Aggregate,
    pub total_evals: usize,
    /// Not written to the summary file, which must be byte-reproducible.
    pub wall_clock: Duration,
}

/// Runs every trial in parallel without touching the filesystem.
pub fn execute_campaign(
    config: &ExperimentConfig,
) -> Result<(CampaignSummary, Vec<RunResult>), CliError> {
    let start = Instant::now();
    let results = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    let trials: Vec<TrialOutcome> = results
        .iter()
        .enumerate()
        .map(|(i, r)| TrialOutcome::new(i, trial_seed(config.seed, i), r))
        .collect();
    let values: Vec<f64> = trials.iter().map(|t| t.f_bst).collect();
    let summary = CampaignSummary {
        config: config.clone(),
        aggregate: Aggregate::from_values(&values),
        total_evals: trials.iter().map(|t| t.evals).sum(),
        trials,
        wall_clock: start.elapsed(),
    };
    Ok((summary, results))
}

/// Runs the campaign and writes trajectories and the summary under `config.out_dir`.
pub fn run_campaign(config: &ExperimentConfig) -> Result<CampaignSummary, CliError> {
    let (summary, results) = execute_campaign(config)?;
    fs::create_dir_all(&config.out_dir).map_err(|source| CliError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    let keep = match config.traj {
        TrajMode::All => results.len(),
        TrajMode::First => 1,
        TrajMode::None => 0,
    };
    for (i, result) in results.iter().enumerate().take(keep) {
        emit_trajectory(result, &trajectory_path(&config.out_dir, i))?;
    }
    emit_summary(&summary, &summary_path(&config.out_dir))?;
    Ok(summary)
}
