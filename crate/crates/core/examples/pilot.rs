//! 1000-trial pilot behind the statistical acceptance thresholds.
//!
//! `cargo run --release -p bas --example pilot`

use bas::cli::{execute_campaign, ConfigLayer, ExperimentConfig, TrajMode};
use bas::objectives::{GOLDSTEIN_PRICE, MICHALEWICZ};
use bas::oracle::random_search_baseline;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIALS: usize = 1000;

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

fn describe(label: &str, mut values: Vec<f64>) {
    values.sort_by(f64::total_cmp);
    println!(
        "  {label:<6} best {:.6}  q10 {:.6}  median {:.6}  q90 {:.6}  worst {:.6}",
        values[0],
        quantile(&values, 0.1),
        quantile(&values, 0.5),
        quantile(&values, 0.9),
        values[values.len() - 1]
    );
}

fn main() {
    for (name, loose) in [(MICHALEWICZ, -1.70), (GOLDSTEIN_PRICE, 10.0)] {
        let cfg = ExperimentConfig::from_layer(&ConfigLayer {
            objective: Some(name.into()),
            trials: Some(TRIALS),
            seed: Some(1),
            traj: Some(TrajMode::None),
            ..Default::default()
        })
        .unwrap();
        let obj = cfg.objective();
        let (summary, _) = execute_campaign(&cfg).unwrap();
        let bas: Vec<f64> = summary.trials.iter().map(|t| t.f_bst).collect();
        let random: Vec<f64> = summary
            .trials
            .iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
                rng.set_stream(1);
                random_search_baseline(&obj, &cfg.init_box, t.evals, &mut rng)
                    .unwrap()
                    .1
            })
            .collect();
        let share = bas.iter().filter(|v| **v <= loose).count() as f64 / TRIALS as f64;
        println!("{name}: {TRIALS} trials, reference configuration, master seed 1");
        describe("BAS", bas);
        describe("random", random);
        println!("  share of BAS trials <= {loose}: {share:.3}");
    }
}
