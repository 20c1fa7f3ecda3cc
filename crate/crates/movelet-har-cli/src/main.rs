//! Command-line front end: dataset validation, dictionary building,
//! classification, evaluation, full experiment runs, and plot-ready
//! timeline exports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use movelet_har::classify::Mode;
use movelet_har::ingest::StepId;

mod commands;

/// Dataset root override honored by every subcommand that reads a config.
const DATASET_ROOT_ENV: &str = "MOVELET_DATASET_ROOT";

#[derive(Parser)]
#[command(
    name = "movelet-har",
    version,
    about = "Movelet-based activity recognition from smartphone accelerometer and gyroscope data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate every configured dataset file.
    Validate(ConfigArgs),
    /// Build a participant's movelet dictionary and write it as JSON.
    BuildDict {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        participant: u32,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        /// Output path for the dictionary artifact.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify test steps against a dictionary artifact.
    Classify {
        #[command(flatten)]
        config: ConfigArgs,
        /// Dictionary artifact produced by `build-dict`.
        #[arg(long)]
        dict: PathBuf,
        /// Directory for the timeline artifacts.
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate timeline artifacts into a confusion matrix and group table.
    Evaluate {
        /// Timeline artifact files (`*.timeline.json`).
        #[arg(required = true)]
        timelines: Vec<PathBuf>,
        /// Optional path for the JSON report; the text table prints either way.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full experiment and write the artifact bundle.
    Run(ConfigArgs),
    /// Export a timeline artifact as TSV or JSON plot data.
    ExportTimeline {
        /// A `*.timeline.json` artifact.
        #[arg(long)]
        artifact: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Tsv)]
        format: ExportFormat,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Config file plus the overrides shared by dataset-reading subcommands.
#[derive(clap::Args)]
struct ConfigArgs {
    /// Experiment config (TOML). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the dataset root from the config file.
    #[arg(long)]
    dataset_root: Option<PathBuf>,
    /// Override the output root from the config file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict to these participants.
    #[arg(long, value_delimiter = ',')]
    participants: Vec<u32>,
    /// Restrict to these modes (accel-only, gyro-only, joint).
    #[arg(long, value_delimiter = ',', value_parser = parse_mode)]
    modes: Vec<Mode>,
    /// Restrict to these steps.
    #[arg(long, value_delimiter = ',', value_parser = parse_step)]
    steps: Vec<StepId>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Tsv,
    Json,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_step(s: &str) -> Result<StepId, String> {
    let id: u8 = s.parse().map_err(|_| format!("not a step number: {s:?}"))?;
    StepId::new(id).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => commands::validate(&args),
        Command::BuildDict {
            config,
            participant,
            mode,
            out,
        } => commands::build_dict(&config, participant, mode, &out),
        Command::Classify { config, dict, out } => commands::classify(&config, &dict, &out),
        Command::Evaluate { timelines, out } => commands::evaluate(&timelines, out.as_deref()),
        Command::Run(args) => commands::run(&args),
        Command::ExportTimeline {
            artifact,
            format,
            out,
        } => commands::export_timeline(&artifact, format, out.as_deref()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
