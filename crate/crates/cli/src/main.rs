mod commands;
mod model_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use acsmote::{Error, ErrorKind};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "acsmote", version, about = "Resampling, training and evaluation for imbalanced tabular data")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Each overrides the matching config key.
#[derive(Debug, Args)]
pub struct Global {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed (`seed`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Input CSV (`dataset.path`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Format of what is printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Label column (`dataset.label`).
    #[arg(long, global = true)]
    pub label: Option<String>,
    /// Feature schema as `name:kind,...` with kind `continuous` or
    /// `nominal` (`dataset.features`).
    #[arg(long, global = true)]
    pub features: Option<String>,
    /// Log level: -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balance a dataset and write it with a provenance sidecar.
    Resample(commands::ResampleArgs),
    /// Fit a model (optionally after resampling) and save it.
    Train(commands::TrainArgs),
    /// Score a saved model on a labelled dataset.
    Evaluate(commands::EvaluateArgs),
    /// Run the repeated-split resampler × model grid and write reports.
    Experiment,
    /// Search DBSCAN parameters for AC-SMOTE.
    GridSearch(commands::GridArgs),
    /// Describe the DBSCAN clusters of the minority samples.
    ClusterReport(commands::ClusterArgs),
    /// Generate the synthetic four-class benchmark table.
    Synth(commands::SynthArgs),
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Internal => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match std::panic::catch_unwind(|| commands::run(&cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(3)
        }
    }
}
