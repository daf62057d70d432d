//! `gdpkit` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage or validation
//! error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<gdpkit::Error> for CliError {
    fn from(e: gdpkit::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gdpkit",
    version,
    about = "GDP/LBP texture features, linear SVM and experiment runner"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a two-class sinusoidal grating corpus as PGM files plus manifest.csv.
    Synth(SynthArgs),
    /// Extract block-histogram features for every image in a manifest.
    Extract(ExtractArgs),
    /// Train a linear SVM on a feature CSV and write the model file.
    Train(TrainArgs),
    /// Score a feature CSV with a trained model.
    Predict(PredictArgs),
    /// Cross-validated accuracy for each descriptor and block grid.
    Eval(EvalArgs),
    /// Clean versus noisy test accuracy per descriptor.
    NoiseBench(NoiseBenchArgs),
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Images per class.
    #[arg(long)]
    pub per_class: Option<usize>,
    /// Square image side in pixels [default: 64].
    #[arg(long)]
    pub size: Option<usize>,
    /// Grating period in pixels [default: 8].
    #[arg(long)]
    pub period: Option<usize>,
    /// Uniform per-pixel jitter half-width, normalized units [default: 0.1].
    #[arg(long)]
    pub jitter: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// gdp, lbp or lbpu [default: gdp].
    #[arg(long)]
    pub kind: Option<String>,
    /// Blocks per side [default: 9].
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Feature CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SvmArgs {
    /// Soft-margin penalty [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Maximum training epochs [default: 1000].
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Relative objective change that stops training [default: 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Seed for the training visit order [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct SplitArgs {
    /// Cross-validation folds [default: 5].
    #[arg(long)]
    pub k: Option<usize>,
    /// Seed for fold assignment [default: 1].
    #[arg(long)]
    pub split_seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Feature CSV from `extract`.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Model file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Predictions CSV to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Comma-separated descriptor kinds [default: gdp].
    #[arg(long)]
    pub kinds: Option<String>,
    /// Comma-separated blocks-per-side values [default: 9].
    #[arg(long)]
    pub blocks: Option<String>,
    /// svm or chi2 [default: svm].
    #[arg(long)]
    pub classifier: Option<String>,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    /// Output directory for report.csv and report.txt.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NoiseBenchArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Comma-separated descriptor kinds [default: gdp,lbp,lbpu].
    #[arg(long)]
    pub kinds: Option<String>,
    /// Blocks per side [default: 9].
    #[arg(long)]
    pub blocks: Option<usize>,
    /// svm or chi2 [default: svm].
    #[arg(long)]
    pub classifier: Option<String>,
    /// Noise mean, normalized units [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub noise_mean: Option<f64>,
    /// Noise variance, normalized units squared [default: 0.001].
    #[arg(long)]
    pub noise_variance: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    pub noise_seed: Option<u64>,
    #[command(flatten)]
    pub svm: SvmArgs,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result =
        config::Settings::load(cli.config.as_deref()).and_then(|settings| match cli.command {
            Command::Synth(a) => commands::synth(&settings, a),
            Command::Extract(a) => commands::extract(&settings, a),
            Command::Train(a) => commands::train(&settings, a),
            Command::Predict(a) => commands::predict(&settings, a),
            Command::Eval(a) => commands::eval(&settings, a),
            Command::NoiseBench(a) => commands::noise_bench(&settings, a),
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
