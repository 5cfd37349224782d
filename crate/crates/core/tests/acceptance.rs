//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bas::cli::{
    execute_campaign, run_campaign, trajectory_path, ConfigLayer, ExperimentConfig, TrajMode,
};
use bas::objectives::{
    goldstein_price, lookup_objective, michalewicz, GOLDSTEIN_PRICE, MICHALEWICZ,
};
use bas::oracle::{grid_search, random_search_baseline, GridSpec};
use bas::search::{
    advance_schedule, detect_step, run, sample_direction, BasConfig, Direction, Init, Position,
    ScheduleSpec,
};

const TRIALS: usize = 200;
const MASTER_SEED: u64 = 20170818;
const CAMPAIGN_BUDGET: Duration = Duration::from_secs(2);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);

type Criterion = Box<dyn Fn() -> Outcome>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn reference_config(objective: &str) -> ExperimentConfig {
    ExperimentConfig::from_layer(&ConfigLayer {
        objective: Some(objective.into()),
        dim: Some(2),
        trials: Some(TRIALS),
        seed: Some(MASTER_SEED),
        traj: Some(TrajMode::None),
        ..Default::default()
    })
    .expect("reference configuration is valid")
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn campaign_criterion(objective: &str, best_max: f64, loose: f64) -> Outcome {
    let cfg = reference_config(objective);
    let start = Instant::now();
    let (summary, _) = execute_campaign(&cfg).expect("campaign runs");
    let elapsed = start.elapsed();
    let share = summary.trials.iter().filter(|t| t.f_bst <= loose).count() as f64 / TRIALS as f64;
    let best = summary.aggregate.best;
    check(
        best <= best_max && share >= 0.5 && elapsed < CAMPAIGN_BUDGET,
        format!(
            "best {best:.6} (<= {best_max}), share <= {loose}: {share:.3} (>= 0.5), median {:.6}, {:.3}s",
            summary.aggregate.median,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_oracle() -> Outcome {
    let start = Instant::now();
    let gp = lookup_objective(GOLDSTEIN_PRICE, 2).unwrap();
    let (gx, gv) = grid_search(&gp, &GridSpec::new(gp.default_init_box().clone(), 401)).unwrap();
    let mi = lookup_objective(MICHALEWICZ, 2).unwrap();
    let (mx, mv) = grid_search(&mi, &GridSpec::new(mi.default_init_box().clone(), 1000)).unwrap();
    let elapsed = start.elapsed();
    check(
        gv == 3.0 && gx == [0.0, -1.0] && (mv + 1.8013).abs() <= 1e-3 && elapsed < ORACLE_BUDGET,
        format!(
            "GP {gv:?} at {gx:?}; Michalewicz {mv:.6} at ({:.5}, {:.5}); {:.2}s",
            mx[0],
            mx[1],
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_baseline() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in [MICHALEWICZ, GOLDSTEIN_PRICE] {
        let cfg = reference_config(name);
        let obj = cfg.objective();
        let (summary, _) = execute_campaign(&cfg).unwrap();
        let bas: Vec<f64> = summary.trials.iter().map(|t| t.f_bst).collect();
        let evals = summary.trials[0].evals;
        let random: Vec<f64> = summary
            .trials
            .iter()
            .map(|t| {
                // separate stream from the one the trial itself consumed
                let mut rng = ChaCha8Rng::seed_from_u64(t.seed);
                rng.set_stream(1);
                random_search_baseline(&obj, &cfg.init_box, evals, &mut rng)
                    .unwrap()
                    .1
            })
            .collect();
        let (mb, mr) = (median(&bas), median(&random));
        ok &= evals == 301 && mb <= mr;
        parts.push(format!(
            "{name}: BAS {mb:.6} vs random {mr:.6} ({evals} evals)"
        ));
    }
    check(ok, parts.join("; "))
}

fn criterion_properties() -> Outcome {
    let mut failures = Vec::new();

    for k in [1, 2, 5, 30] {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64 + 1000);
        let worst = (0..10_000)
            .map(|_| (sample_direction(k, &mut rng).norm() - 1.0).abs())
            .fold(0.0, f64::max);
        if worst > 1e-9 {
            failures.push(format!("unit norm k={k}: {worst:e}"));
        }
    }

    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let mut cfg = reference_config(GOLDSTEIN_PRICE);
        cfg.trials = 20;
        cfg.traj = TrajMode::All;
        cfg.out_dir = dir.path().to_path_buf();
        run_campaign(&cfg).unwrap();
    }
    if read_dir_sorted(dirs[0].path()) != read_dir_sorted(dirs[1].path()) {
        failures.push("campaign outputs differ".into());
    }
    for i in 0..20 {
        let text = fs::read_to_string(trajectory_path(dirs[0].path(), i)).unwrap();
        let f_bst: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        if f_bst.windows(2).any(|w| w[1] > w[0]) {
            failures.push(format!("trajectory {i} f_bst increases"));
        }
    }

    for name in [MICHALEWICZ, GOLDSTEIN_PRICE] {
        let cfg = reference_config(name);
        let obj = cfg.objective();
        let (summary, results) = execute_campaign(&cfg).unwrap();
        for (t, r) in summary.trials.iter().zip(&results) {
            if obj.evaluate(&t.x_bst) != t.f_bst {
                failures.push(format!("{name} trial {}: f(x_bst) != f_bst", t.index));
            }
            if r.evals != 1 + 3 * r.records.len() {
                failures.push(format!("{name} trial {}: eval accounting", t.index));
            }
        }
    }

    let x = Position::new(vec![0.3, -1.2, 4.0]).unwrap();
    let b = Direction::new(vec![0.2, 0.5, -0.1]).unwrap();
    if detect_step(&x, 0.7, &b, 2.5, 2.5).unwrap() != x {
        failures.push("sign(0) moved".into());
    }

    let d = (0..400).fold(2.0, |d, _| {
        advance_schedule(d, &ScheduleSpec::default_antenna())
    });
    if (d - 0.2).abs() > 1e-6 {
        failures.push(format!("fixed point {d}"));
    }

    let obj = lookup_objective(MICHALEWICZ, 2).unwrap();
    for seed in 0..20 {
        let mut cfg = BasConfig::new(2, Init::Uniform(obj.default_init_box().clone()));
        cfg.seed = seed;
        let a = run(&cfg, |x| obj.evaluate(x)).unwrap();
        let scaled = run(&cfg, |x| 7.5 * obj.evaluate(x)).unwrap();
        if a.records
            .iter()
            .zip(&scaled.records)
            .any(|(p, q)| p.x != q.x)
        {
            failures.push(format!("scaling changed trajectory for seed {seed}"));
        }
    }

    let ok = failures.is_empty();
    check(
        ok,
        if ok {
            "all invariants hold".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

/// Goldstein-Price by hand: each factor evaluated term by term at the point.
fn criterion_known_values() -> Outcome {
    let m = michalewicz(&[2.20319, 1.57049], 10);
    let g_opt = goldstein_price(&[0.0, -1.0]).unwrap();
    // (0, 0): [1 + 1 * 19] * [30 + 0 * 18] = 20 * 30
    let g_origin = goldstein_price(&[0.0, 0.0]).unwrap();
    // (1, 1): [1 + 9 * (19 - 14 + 3 - 14 + 6 + 3)] * [30 + 1 * (18 - 32 + 12 + 48 - 36 + 27)] = 28 * 67
    let g_ones = goldstein_price(&[1.0, 1.0]).unwrap();
    check(
        (m + 1.8013).abs() <= 1e-3
            && ((g_opt - 3.0) / 3.0).abs() <= 1e-9
            && g_origin == 20.0 * 30.0
            && g_ones == 28.0 * 67.0,
        format!("michalewicz {m:.6}, GP(0,-1) {g_opt:?}, GP(0,0) {g_origin:?}, GP(1,1) {g_ones:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "1 michalewicz reproduction",
            Box::new(|| campaign_criterion(MICHALEWICZ, -1.795, -1.70)),
        ),
        (
            "2 goldstein-price reproduction",
            Box::new(|| campaign_criterion(GOLDSTEIN_PRICE, 3.05, 10.0)),
        ),
        ("3 oracle equivalence", Box::new(criterion_oracle)),
        ("4 baseline dominance", Box::new(criterion_baseline)),
        ("5 property suite", Box::new(criterion_properties)),
        ("6 known values", Box::new(criterion_known_values)),
    ];
    let mut failed = 0;
    for (name, criterion) in &criteria {
        let outcome = criterion();
        let tag = if outcome.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", outcome.detail);
        failed += usize::from(!outcome.ok);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
