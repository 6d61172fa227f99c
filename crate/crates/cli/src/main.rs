mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::UsageError;

/// Distortion synthesis, dataset building, pairwise scoring and evaluation
/// for image quality assessment.
#[derive(Parser)]
#[command(name = "iqakit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one distortion, or a batch of them.
    Distort(DistortArgs),
    /// Build a dataset JSONL plus its images.
    Build(BuildArgs),
    /// Score images from pairwise comparisons.
    Score(ScoreArgs),
    /// Evaluate model predictions against a gold dataset.
    Eval(EvalArgs),
    /// Print the severity and combination tables as JSON.
    Catalog(CatalogArgs),
}

#[derive(Args)]
pub struct DistortArgs {
    /// JSON file with default values for any of these options.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Sub-category id (`jpeg`, `motion_blur`) or display name.
    #[arg(long)]
    sub: Option<String>,
    /// Severity level, 1 to 5.
    #[arg(long)]
    level: Option<u8>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Parameter override as JSON, e.g. '{"kind":"jpeg","quality":40}'.
    #[arg(long)]
    params: Option<String>,
    /// JSONL of jobs: {"input", "output", "sub", "level", "seed"?, "params"?}.
    #[arg(long, conflicts_with_all = ["input", "output", "sub", "level", "params"])]
    batch: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory of reference images.
    #[arg(long)]
    refs: Option<PathBuf>,
    /// identification | instant-rating | assessment-prompt | comparison-prompt
    #[arg(long)]
    task: Option<String>,
    /// full-reference | non-reference
    #[arg(long)]
    setting: Option<String>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    pristine_frac: Option<f64>,
    #[arg(long)]
    multi_frac: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// MOS CSV (image_path, reference_path, content_group_id, mos).
    #[arg(long)]
    mos: Option<PathBuf>,
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSONL, one group per line: {"group_id", "images": [{"id", "path", "mos"?}]}.
    #[arg(long)]
    groups: Option<PathBuf>,
    /// round-robin | random-k
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Model endpoint URL.
    #[arg(long, conflicts_with = "oracle")]
    endpoint: Option<String>,
    /// Environment variable holding the endpoint bearer token.
    #[arg(long)]
    token_env: Option<String>,
    #[arg(long)]
    timeout_secs: Option<f64>,
    #[arg(long)]
    max_retries: Option<u32>,
    /// Use the simulated comparator driven by the group MOS.
    #[arg(long)]
    oracle: bool,
    /// Error rate of the simulated comparator.
    #[arg(long)]
    eps: Option<f64>,
    /// unweighted | confidence
    #[arg(long)]
    weighting: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Score table CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the correlation report (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the comparison plans as JSONL.
    #[arg(long)]
    plans: Option<PathBuf>,
    /// Also write the comparison outcomes as JSONL.
    #[arg(long)]
    outcomes: Option<PathBuf>,
    /// Concurrent requests or worker threads.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Predictions JSONL: {"id", "text"}.
    #[arg(long)]
    pred: Option<PathBuf>,
    /// Gold dataset JSONL.
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long)]
    task: Option<String>,
    /// json | table
    #[arg(long)]
    report: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CatalogArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Distort(a) => commands::distort::run(a),
        Command::Build(a) => commands::build::run(a),
        Command::Score(a) => commands::score::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Catalog(a) => commands::catalog::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}");
            eprintln!("run `iqakit --help` for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
