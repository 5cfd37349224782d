use std::fs;
use std::path::Path;
use std::process::Command;

use bas::cli::{
    execute_campaign, parse_config, run_campaign, run_trial, summary_path, trajectory_path,
    write_trajectory, Aggregate, CliError, ConfigLayer, ExperimentConfig, SummaryDocument,
    TrajMode,
};
use bas::lookup_objective;

fn config(objective: &str, trials: usize, out: &Path) -> ExperimentConfig {
    ExperimentConfig::from_layer(&ConfigLayer {
        objective: Some(objective.into()),
        trials: Some(trials),
        seed: Some(99),
        out_dir: Some(out.to_path_buf()),
        traj: Some(TrajMode::All),
        ..Default::default()
    })
    .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|v| v.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn trajectory_layout_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("michalewicz", 3, dir.path());
    run_campaign(&cfg).unwrap();
    let obj = lookup_objective("michalewicz", 2).unwrap();

    for trial in 0..3 {
        let path = trajectory_path(dir.path(), trial);
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 101);
        let (header, rows) = read_csv(&path);
        assert_eq!(header, ["t", "f_x", "f_bst", "d", "delta", "x_0", "x_1"]);
        let result = run_trial(&cfg, trial).unwrap();
        for (row, rec) in rows.iter().zip(&result.records) {
            assert_eq!(row[0] as usize, rec.t);
            assert_eq!(row[1].to_bits(), rec.f_x.to_bits());
            assert_eq!(row[2].to_bits(), rec.f_bst.to_bits());
            assert_eq!(row[3].to_bits(), rec.d.to_bits());
            assert_eq!(row[4].to_bits(), rec.delta.to_bits());
            assert_eq!(obj.evaluate(&row[5..]), row[1]);
        }
        assert!(rows.windows(2).all(|w| w[1][2] <= w[0][2]));
    }
}

#[test]
fn trajectory_writer_handles_extreme_values() {
    let mut cfg = bas::BasConfig::new(
        1,
        bas::Init::Point(bas::Position::new(vec![1e-300]).unwrap()),
    );
    cfg.max_iters = 3;
    let res = bas::run(&cfg, |x| x[0] * 1e290 + 1e-320).unwrap();
    let mut buf = Vec::new();
    write_trajectory(&res, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    for (line, rec) in text.lines().skip(1).zip(&res.records) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(fields[1].to_bits(), rec.f_x.to_bits());
        assert_eq!(fields[5].to_bits(), rec.x[0].to_bits());
    }
}

#[test]
fn summary_aggregates_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("goldstein_price", 25, dir.path());
    let summary = run_campaign(&cfg).unwrap();
    let doc = SummaryDocument::read(&summary_path(dir.path())).unwrap();

    let values: Vec<f64> = doc.trials.iter().map(|t| t.f_bst).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(doc.aggregate.best, min);
    assert_eq!(summary.aggregate.best, min);
    let recomputed = Aggregate::from_values(&values);
    assert_eq!(doc.aggregate.median, recomputed.median);
    assert_eq!(doc.aggregate.mean, recomputed.mean);
    assert_eq!(doc.aggregate.std_dev, recomputed.std_dev);
    assert_eq!(doc.aggregate.best_trial, recomputed.best_trial);
    assert_eq!(doc.aggregate.total_evals, 25 * 301);

    // independent statistics
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    assert_eq!(doc.aggregate.median, sorted[12]);
    let mean = values.iter().sum::<f64>() / 25.0;
    assert!((doc.aggregate.mean - mean).abs() <= 1e-12 * mean.abs());
}

#[test]
fn single_trial_statistics_coincide() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("michalewicz", 1, dir.path());
    let summary = run_campaign(&cfg).unwrap();
    let run = run_trial(&cfg, 0).unwrap();
    let a = summary.aggregate;
    assert_eq!(a.best, run.f_bst);
    assert_eq!(a.median, a.best);
    assert_eq!(a.mean, a.best);
    assert_eq!(a.std_dev, 0.0);
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn campaigns_are_byte_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_campaign(&config("goldstein_price", 12, a.path())).unwrap();
    run_campaign(&config("goldstein_price", 12, b.path())).unwrap();
    let (fa, fb) = (dir_bytes(a.path()), dir_bytes(b.path()));
    assert_eq!(fa.len(), 13);
    assert_eq!(fa, fb);
}

#[test]
fn summary_echo_replays_the_campaign() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut layer = ConfigLayer {
        objective: Some("michalewicz".into()),
        dim: Some(3),
        trials: Some(7),
        seed: Some(u64::MAX - 3),
        eta_d: Some(0.9),
        init_box: Some("0.1:3,0:3.141592653589793,0.5:0.75".into()),
        stall: Some(30),
        clamp: Some(true),
        out_dir: Some(a.path().to_path_buf()),
        ..Default::default()
    };
    run_campaign(&ExperimentConfig::from_layer(&layer).unwrap()).unwrap();

    let flags = ConfigLayer {
        out_dir: Some(b.path().to_path_buf()),
        ..Default::default()
    };
    let replay = parse_config(&flags, Some(&summary_path(a.path()))).unwrap();
    run_campaign(&replay).unwrap();
    assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));

    layer.out_dir = Some(b.path().to_path_buf());
    assert_eq!(replay, ExperimentConfig::from_layer(&layer).unwrap());
}

#[test]
fn trial_results_do_not_depend_on_execution_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("goldstein_price", 10, dir.path());
    let (_, forward) = execute_campaign(&cfg).unwrap();
    let mut reversed: Vec<_> = (0..10).rev().map(|i| run_trial(&cfg, i).unwrap()).collect();
    reversed.reverse();
    assert_eq!(forward, reversed);
}

#[test]
fn traj_modes_control_files() {
    for (mode, expected) in [
        (TrajMode::All, 4),
        (TrajMode::First, 1),
        (TrajMode::None, 0),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config("sphere", 4, dir.path());
        cfg.traj = mode;
        run_campaign(&cfg).unwrap();
        let csvs = fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().unwrap() == "csv")
            .count();
        assert_eq!(csvs, expected, "{mode}");
    }
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("exp.toml");
    fs::write(
        &file,
        "objective = \"goldstein_price\"\ntrials = 200\ndelta0 = 0.25\n",
    )
    .unwrap();
    let flags = ConfigLayer {
        trials: Some(50),
        ..Default::default()
    };
    let cfg = parse_config(&flags, Some(&file)).unwrap();
    assert_eq!(cfg.trials, 50);
    assert_eq!(cfg.delta0, 0.25);
    assert_eq!(cfg.iters, 100);

    fs::write(&file, "objective = \"sphere\"\nd0 = \"abc\"\n").unwrap();
    assert!(matches!(
        parse_config(&flags, Some(&file)),
        Err(CliError::ConfigFile { .. })
    ));
    let missing = dir.path().join("missing.toml");
    assert!(matches!(
        parse_config(&flags, Some(&missing)),
        Err(CliError::Io { .. })
    ));
}

#[test]
fn unwritable_output_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let cfg = config("sphere", 1, &blocker.join("sub"));
    match run_campaign(&cfg) {
        Err(CliError::Io { path, .. }) => assert!(path.starts_with(&blocker)),
        other => panic!("{other:?}"),
    }
}

fn bas_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bas"))
}

#[test]
fn binary_run_and_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let out = bas_bin()
        .args([
            "run",
            "--objective",
            "michalewicz",
            "--dim",
            "2",
            "--trials",
            "4",
        ])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(summary_path(dir.path()).exists());
    assert!(trajectory_path(dir.path(), 0).exists());
    assert!(!trajectory_path(dir.path(), 1).exists());

    let out = bas_bin()
        .args(["run", "--objective", "sphere", "--d0", "-1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("d0"));

    let out = bas_bin()
        .args(["run", "--objective", "rosenbrock"])
        .output()
        .unwrap();
    assert!(!out.status.success());

    let out = bas_bin()
        .args([
            "oracle",
            "grid",
            "--objective",
            "goldstein_price",
            "--resolution",
            "401",
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("best_value = 3.0"), "{stdout}");
    assert!(stdout.contains("best_x = [0.0, -1.0]"), "{stdout}");

    let run_random = || {
        bas_bin()
            .args([
                "oracle",
                "random",
                "--objective",
                "sphere",
                "--box",
                "-1:1,-1:1",
                "--seed",
                "5",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run_random(), run_random());
}
