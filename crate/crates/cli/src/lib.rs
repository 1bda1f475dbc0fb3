//! Command-line pipeline: ingest, analyze, frames, simulate, report.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use formanet_core::features::ValenceMode;
use formanet_core::ingest::{Format, TargetRule};
use formanet_core::ClosenessVariant;

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "formanet", version, about = "Forma mentis network analysis of survey and simulated data")]
pub struct Cli {
    /// TOML file with default values for any flag; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, validate and clean a participant file.
    Ingest(IngestArgs),
    /// Build individual networks and run correlations and regressions.
    Analyze(AnalyzeArgs),
    /// Median-split cohorts, build group networks and draw semantic frames.
    Frames(FramesArgs),
    /// Collect simulated participants from a chat-completions endpoint.
    Simulate(SimulateArgs),
    /// Summarise command outputs as Markdown or HTML.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Raw participant file (CSV or JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    /// Directory for the cleaned dataset, report and manifest.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Comma-separated target cues for the exclusion rule.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// `all-blank` or `any-blank`.
    #[arg(long)]
    pub rule: Option<TargetRule>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Cleaned dataset (JSON or CSV).
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for tables, figures and the manifest.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Two comma-separated focus concepts.
    #[arg(long, value_delimiter = ',')]
    pub focus: Option<Vec<String>>,
    /// `graph-size` or `component-normalized`.
    #[arg(long)]
    pub closeness: Option<ClosenessVariant>,
    /// `raw` (median rating) or `label` (individual −1/0/+1).
    #[arg(long)]
    pub valence_mode: Option<ValenceMode>,
    /// Significance level used to flag correlogram cells.
    #[arg(long)]
    pub correlation_alpha: Option<f64>,
    /// Questionnaire item map JSON; the bundled map is used otherwise.
    #[arg(long)]
    pub item_map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FramesArgs {
    /// Dataset as `name=path`; repeat for several sources.
    #[arg(long = "group", required = true)]
    pub groups: Vec<String>,
    /// Directory for networks, frames and the manifest.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Comma-separated target concepts.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// Significance level of the group valence test.
    #[arg(long)]
    pub valence_alpha: Option<f64>,
    /// Questionnaire item map JSON used for the median split.
    #[arg(long)]
    pub item_map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model name sent with every request.
    #[arg(long)]
    pub model: Option<String>,
    /// Base URL of a chat-completions API, e.g. `https://host/v1`.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Number of simulated participants (default 300).
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed for participant profiles (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// `exp1`, `exp2` or a comma-separated word list.
    #[arg(long)]
    pub cues: Option<String>,
    /// Dataset path; `.csv` writes CSV, anything else JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Run log path; defaults to the dataset path with `.log.jsonl`.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Participants simulated at once (default 4).
    #[arg(long)]
    pub concurrency: Option<usize>,
    /// Extra attempts per task after a failure (default 3).
    #[arg(long)]
    pub retries: Option<u32>,
    /// Sampling temperature (default 1.0).
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Environment variable holding the API key.
    #[arg(long)]
    pub api_key_env: Option<String>,
    /// Send each task as its own conversation.
    #[arg(long)]
    pub independent_calls: bool,
    /// Initial delay before retrying a transport error, doubled per attempt (default 500).
    #[arg(long)]
    pub backoff_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Markdown,
    Html,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directories searched recursively for command manifests.
    #[arg(long = "from", required = true)]
    pub dirs: Vec<PathBuf>,
    /// Report file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: ReportFormat,
}

pub fn run(cli: Cli) -> Result<()> {
    let file = config::FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest(a) => commands::ingest::run(a, &file),
        Command::Analyze(a) => commands::analyze::run(a, &file),
        Command::Frames(a) => commands::frames::run(a, &file),
        Command::Simulate(a) => commands::simulate::run(a, &file),
        Command::Report(a) => commands::report::run(a),
    }
}
