use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod manifest;

/// Trend detection by marker-based stigmergy with differential-evolution tuning.
#[derive(Debug, Parser)]
#[command(name = "stigtrend", version)]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a labeled corpus from a JSON spec.
    Gen(GenArgs),
    /// Tune pipeline parameters on a labeled corpus.
    Train(TrainArgs),
    /// Classify every series of a CSV file.
    Run(RunArgs),
    /// Repeated holdout evaluation, or the F x CR grid study.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct Fixed {
    /// Comparison lag in steps.
    #[arg(long)]
    lag: Option<usize>,
    /// Track grid resolution.
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// DE configuration; defaults apply when omitted.
    #[arg(long)]
    de: Option<PathBuf>,
    /// Output parameter file.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed of the DE configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Put the expert parameters in the initial population.
    #[arg(long)]
    inject_expert: bool,
    #[command(flatten)]
    fixed: Fixed,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    series: PathBuf,
    /// Parameter file; the expert parameters when omitted.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    fixed: Fixed,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// DE configuration used for training in each run.
    #[arg(long, conflicts_with_all = ["params", "expert"])]
    de: Option<PathBuf>,
    /// Evaluate fixed parameters instead of training.
    #[arg(long, conflicts_with = "expert")]
    params: Option<PathBuf>,
    /// Evaluate the expert parameters without training.
    #[arg(long)]
    expert: bool,
    /// Run the F x CR grid study.
    #[arg(long, conflicts_with_all = ["params", "expert"])]
    grid: bool,
    /// Output report; tables are written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value_t = 0.2)]
    train_fraction: f64,
    #[arg(long)]
    inject_expert: bool,
    #[command(flatten)]
    fixed: Fixed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(commands::EXIT_RUNTIME);
        }
    }
    let result = match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Train(a) => commands::train(a),
        Command::Run(a) => commands::run(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
