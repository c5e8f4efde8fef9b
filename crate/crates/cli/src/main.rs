mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use graphlet_cnn::sample::Estimator;
use graphlet_cnn::{GraphletPattern, DATASET_SCHEMA_VERSION, FLOPS_CONVENTION, MODEL_FORMAT_VERSION};

use error::CliError;

/// Graphlet counting with exact enumeration, sampling estimators and a CNN.
#[derive(Debug, Parser)]
#[command(name = "gcnn")]
struct Cli {
    /// Worker threads for data-parallel sections.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// More log output on standard error (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate random graphs into a dataset file.
    Gen(GenArgs),
    /// Exact graphlet counts for every graph in a dataset file.
    Count(CountArgs),
    /// Sampling estimate of one pattern's count for every graph in a dataset file.
    Estimate(EstimateArgs),
    /// Build the labeled dataset, train a CNN and evaluate it.
    Train(TrainArgs),
    /// Evaluate a trained model on one split of an experiment's dataset.
    Eval(EvalArgs),
    /// Compare CNN FLOPs with sampler comparisons at matched relative error.
    Compare(CompareArgs),
    /// Forward-pass FLOPs of a model configuration.
    Flops(FlopsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphModel {
    Er,
    Rgg,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite an existing output.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: GraphModel,
    /// Nodes per graph.
    #[arg(long)]
    n: usize,
    /// Edge probability (ER).
    #[arg(long, required_if_eq("model", "er"))]
    p: Option<f64>,
    /// Connection radius (RGG).
    #[arg(long, required_if_eq("model", "rgg"))]
    r: Option<f64>,
    /// Space dimension (RGG).
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Dataset file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Graphlet size (3, 4 or 5); implied by --pattern when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
    k: Option<u8>,
    /// Report only this pattern.
    #[arg(long, value_parser = parse_pattern)]
    pattern: Option<GraphletPattern>,
    /// Accepted for uniformity; exact counting uses no randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_pattern)]
    pattern: GraphletPattern,
    /// edge, edge_full or mcmc.
    #[arg(long, value_parser = parse_method)]
    method: Estimator,
    /// Edges sampled (edge) or walk steps (mcmc).
    #[arg(long)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Experiment configuration JSON.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured maximum epoch count.
    #[arg(long)]
    max_epochs: Option<usize>,
    /// Output directory (overrides the configured one).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SplitArg {
    Train,
    Validation,
    Test,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    config: PathBuf,
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value = "test")]
    split: SplitArg,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Sampler methods (comma separated); overrides the configuration.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Option<Vec<Estimator>>,
    /// Largest budget tried per method.
    #[arg(long)]
    cap: Option<u64>,
    /// Tune samplers on the first N test graphs.
    #[arg(long)]
    tune_graphs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for comparison.csv and comparison.json.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct FlopsArgs {
    /// Model configuration JSON.
    #[arg(long, required_unless_present = "model", conflicts_with = "model")]
    config: Option<PathBuf>,
    /// Saved model file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Accepted for uniformity; FLOPs are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_pattern(s: &str) -> Result<GraphletPattern, String> {
    s.parse().map_err(|e: graphlet_cnn::exact::ParsePatternError| e.to_string())
}

fn parse_method(s: &str) -> Result<Estimator, String> {
    s.parse()
}

static VERSION: LazyLock<String> = LazyLock::new(|| {
    format!(
        "{} (model format {MODEL_FORMAT_VERSION}, dataset schema {DATASET_SCHEMA_VERSION}, flops convention {FLOPS_CONVENTION})",
        env!("CARGO_PKG_VERSION")
    )
});

fn run(cli: Cli) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Count(a) => commands::count(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Train(a) => commands::train(a),
        Command::Eval(a) => commands::eval(a),
        Command::Compare(a) => commands::compare(a),
        Command::Flops(a) => commands::flops(a),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().version(VERSION.as_str()).try_get_matches();
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `gcnn --help` for the synopsis");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
