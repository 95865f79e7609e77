mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

/// Trench cleanliness from segmentation masks.
#[derive(Debug, Parser)]
#[command(name = "trenchcv", version, about)]
pub struct Cli {
    /// Class scheme file: {"classes": ["background", "soil", "straw"]}
    #[arg(long, global = true, value_name = "FILE")]
    classes: Option<PathBuf>,

    /// Log progress to stderr
    #[arg(long, short, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Segment a frame sequence and report cumulative class percentages
    Quantify(QuantifyArgs),
    /// Score predicted masks against ground truth (IoU, accuracy)
    Evaluate(EvaluateArgs),
    /// Compare run reports and rank them by cleanliness
    Compare(CompareArgs),
    /// Generate synthetic trench scenes with ground-truth masks
    Generate(GenerateArgs),
    /// Split a dataset manifest into training and validation stems
    Split(SplitArgs),
    /// Measure per-frame segmentation latency
    Bench(BenchArgs),
    /// Write augmented copies of frame/mask pairs
    Augment(AugmentArgs),
}

#[derive(Debug, Args)]
pub struct SegmenterArgs {
    /// oracle:MASKS_DIR | hsv[:PARAMS.json] | remote:HOST:PORT
    #[arg(long, value_name = "SPEC")]
    segmenter: String,

    /// Connect and I/O timeout for remote workers, in seconds
    #[arg(long, default_value_t = 5.0, value_name = "SECS")]
    timeout: f64,
}

#[derive(Debug, Args)]
pub struct QuantifyArgs {
    /// Directory of frames (PNG or PPM), processed in file-stem order
    #[arg(long, value_name = "DIR")]
    frames: PathBuf,

    #[command(flatten)]
    seg: SegmenterArgs,

    /// Run name, e.g. the row cleaner under test [default: frames dir name]
    #[arg(long)]
    name: Option<String>,

    /// Report path [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, default_value = "json", value_parser = ["json", "csv", "text"])]
    format: String,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predicted masks
    #[arg(long, value_name = "DIR")]
    pred: PathBuf,

    /// Ground-truth masks, paired with predictions by file stem
    #[arg(long, value_name = "DIR")]
    gt: PathBuf,

    /// Model name for the report row
    #[arg(long, default_value = "model")]
    name: String,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, default_value = "json", value_parser = ["json", "csv", "text"])]
    format: String,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// NAME=REPORT.json, repeated once per run
    #[arg(long = "run", value_name = "NAME=REPORT", required = true, value_parser = parse_run)]
    runs: Vec<(String, PathBuf)>,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, default_value = "text", value_parser = ["json", "csv", "text"])]
    format: String,
}

fn parse_run(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_owned(), PathBuf::from(path)))
        }
        _ => Err(format!("expected NAME=REPORT, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of scenes
    #[arg(long)]
    n: usize,

    /// Target straw fraction in [0, 1]
    #[arg(long, default_value_t = 0.3)]
    straw: f64,

    /// Seed of the first scene; scene i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory (frames/, masks/, manifest.json)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    #[arg(long, default_value_t = 512)]
    width: u32,

    #[arg(long, default_value_t = 512)]
    height: u32,

    /// Machinery band height in rows
    #[arg(long, default_value_t = 24)]
    band: u32,

    /// Brightness noise amplitude (0 disables)
    #[arg(long, default_value_t = 15)]
    noise: u8,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,

    /// Training share, strictly between 0 and 1
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Split JSON path [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_name = "DIR")]
    frames: PathBuf,

    #[command(flatten)]
    seg: SegmenterArgs,

    /// Existing run report to which the timing is added
    #[arg(long, value_name = "REPORT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long, value_name = "DIR")]
    frames: PathBuf,

    #[arg(long, value_name = "DIR")]
    masks: PathBuf,

    /// Output directory (frames/, masks/)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Random transforms per pair, used when no --transform is given
    #[arg(long, default_value_t = 1)]
    copies: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// rotate90 | rotate180 | rotate270 | flip_h | flip_v | scale:K |
    /// brightness:D | contrast:G (repeatable)
    #[arg(long = "transform", value_name = "T")]
    transforms: Vec<String>,
}

pub enum Failure {
    /// Bad invocation: reported with usage text, exit code 2.
    Usage {
        subcommand: &'static str,
        message: String,
    },
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

pub fn usage(subcommand: &'static str, message: impl Into<String>) -> Failure {
    Failure::Usage {
        subcommand,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .format_target(false)
        .init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage {
            subcommand,
            message,
        }) => {
            let mut cmd = Cli::command();
            cmd.build();
            let sub = cmd
                .find_subcommand_mut(subcommand)
                .expect("known subcommand");
            sub.error(ErrorKind::InvalidValue, message).exit()
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
