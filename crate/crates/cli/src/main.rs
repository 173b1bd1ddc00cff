//! `ela`: sample designs, compute landscape features on original or
//! reduced samples, and run the timing, classification and similarity
//! experiments. Every output file starts with a `# config-sha256=` line and
//! has its resolved configuration written next to it as `<out>.config.json`.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 time budget
//! exceeded, 4 numerical failure.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Context;
use error::{CliError, CliResult};
use output::OutputRoot;

#[derive(Debug, Parser)]
#[command(name = "ela", version, about = "Landscape features on original and dimension-reduced samples")]
struct Cli {
    /// JSON file with command parameters; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory that all outputs are written into
    #[arg(long, global = true, env = "ELA_OUTPUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Benchmark suite metadata
    #[command(subcommand)]
    Suite(SuiteCommand),
    /// Write a Latin hypercube design evaluated on one instance
    Sample(commands::SampleArgs),
    /// Compute feature groups for one design
    Features(commands::FeaturesArgs),
    /// Project a design onto m rank-weighted principal directions
    Reduce(commands::ReduceArgs),
    /// Time feature groups across dimensions
    Timebench(commands::TimebenchArgs),
    /// Cross-validated property classification
    Classify(commands::ClassifyArgs),
    /// LOPO accuracy for every (dimension, m) pair
    Sweepm(commands::SweepArgs),
    /// Rank agreement of features on original and reduced samples
    Similarity(commands::SimilarityArgs),
    /// Average feature-importance ranks over LOPO folds
    Importance(commands::ImportanceArgs),
}

#[derive(Debug, Subcommand)]
enum SuiteCommand {
    /// Manifest of all functions as JSON
    List(commands::SuiteListArgs),
    /// Property labels per function
    Labels(commands::LabelsArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot configure {jobs} worker threads: {e}")))?;
    }
    let ctx = Context { file: config::load_file(cli.config.as_deref())?, root: OutputRoot::new(&cli.out_dir)? };
    let written = match &cli.command {
        Command::Suite(SuiteCommand::List(a)) => commands::suite_list(&ctx, a)?,
        Command::Suite(SuiteCommand::Labels(a)) => commands::suite_labels(&ctx, a)?,
        Command::Sample(a) => commands::sample(&ctx, a)?,
        Command::Features(a) => commands::features(&ctx, a)?,
        Command::Reduce(a) => commands::reduce_cmd(&ctx, a)?,
        Command::Timebench(a) => commands::timebench(&ctx, a)?,
        Command::Classify(a) => commands::classify(&ctx, a)?,
        Command::Sweepm(a) => commands::sweepm(&ctx, a)?,
        Command::Similarity(a) => commands::similarity_cmd(&ctx, a)?,
        Command::Importance(a) => commands::importance(&ctx, a)?,
    };
    commands::report(&written)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string(), "exit_code": code });
            eprintln!("{line}");
            ExitCode::from(code as u8)
        }
    }
}
