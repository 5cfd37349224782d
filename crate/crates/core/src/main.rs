use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bas::cli::{parse_config, run_campaign, summary_path, ConfigLayer};
use bas::objectives::{lookup_objective, Dimensionality, Objective};
use bas::oracle::{grid_search, random_search_baseline, GridSpec, DEFAULT_GRID_CAP};
use bas::SearchBox;

#[derive(Parser)]
#[command(name = "bas", version, about = "Beetle antennae search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded multi-trial campaign
    Run(RunArgs),
    /// Brute-force references
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with keys named after the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    layer: ConfigLayer,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive grid minimization
    Grid(GridArgs),
    /// Uniform random-search baseline
    Random(RandomArgs),
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long)]
    objective: String,
    #[arg(long)]
    dim: Option<usize>,
    /// Search box `lo:hi[,lo:hi...]`; defaults to the objective's own box
    #[arg(long = "box", allow_hyphen_values = true)]
    bounds: Option<SearchBox>,
}

impl ObjectiveArgs {
    fn resolve(&self) -> Result<(Objective, SearchBox), String> {
        let dim = match self.dim {
            Some(d) => d,
            None => match lookup_objective(&self.objective, 2)
                .map_err(|e| e.to_string())?
                .dimensionality()
            {
                Dimensionality::Fixed(d) => d,
                Dimensionality::Flexible => 2,
            },
        };
        let objective = lookup_objective(&self.objective, dim).map_err(|e| e.to_string())?;
        let bounds = self
            .bounds
            .clone()
            .unwrap_or_else(|| objective.default_init_box().clone());
        Ok((objective, bounds))
    }
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    target: ObjectiveArgs,
    /// Nodes per axis
    #[arg(long, default_value_t = 401)]
    resolution: usize,
    /// Maximum total node count
    #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
    cap: u128,
}

#[derive(Args)]
struct RandomArgs {
    #[command(flatten)]
    target: ObjectiveArgs,
    #[arg(long, default_value_t = 301)]
    evals: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn print_best(objective: &Objective, x: &[f64], value: f64) {
    println!("objective = {}", objective.name());
    println!("best_value = {value:?}");
    println!("best_x = {x:?}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => parse_config(&args.layer, args.config.as_deref())
            .and_then(|config| run_campaign(&config))
            .map(|summary| {
                let a = &summary.aggregate;
                println!("objective = {}", summary.config.objective);
                println!("trials = {}", summary.trials.len());
                println!("best = {:?} (trial {})", a.best, a.best_trial);
                println!("median = {:?}", a.median);
                println!("mean = {:?}", a.mean);
                println!("std_dev = {:?}", a.std_dev);
                println!("total_evals = {}", summary.total_evals);
                println!("wall_clock_s = {:.3}", summary.wall_clock.as_secs_f64());
                println!(
                    "summary = {}",
                    summary_path(&summary.config.out_dir).display()
                );
            })
            .map_err(|e| e.to_string()),
        Command::Oracle(OracleCommand::Grid(args)) => {
            args.target.resolve().and_then(|(obj, bounds)| {
                let mut grid = GridSpec::new(bounds, args.resolution);
                grid.cap = args.cap;
                let (x, v) = grid_search(&obj, &grid).map_err(|e| e.to_string())?;
                print_best(&obj, &x, v);
                Ok(())
            })
        }
        Command::Oracle(OracleCommand::Random(args)) => {
            args.target.resolve().and_then(|(obj, bounds)| {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                let (x, v) = random_search_baseline(&obj, &bounds, args.evals, &mut rng)
                    .map_err(|e| e.to_string())?;
                print_best(&obj, &x, v);
                Ok(())
            })
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
