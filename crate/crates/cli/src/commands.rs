use std::collections::HashSet;
use std::path::Path;
use std::time::Duration;

use anyhow::Context;
use log::info;
use trenchcv::metrics::CumulativeAverager;
use trenchcv::pipeline;
use trenchcv::raster::{scan_sequence, ClassScheme, FrameSequence};
use trenchcv::report::{
    emit, emit_summary, fmt_2dp, ComparisonTable, Format, RunSummary, TimingSummary,
};
use trenchcv::segmenter::{Segmenter, SegmenterSpec};
use trenchcv::synthgen::{
    augment_dataset, generate_dataset, split_dataset, AugmentPlan, Manifest, SceneParams,
    Transform, FRAMES_SUBDIR,
};

use crate::output::{deliver, write_atomic};
use crate::{
    usage, AugmentArgs, BenchArgs, Cli, Command, CompareArgs, EvaluateArgs, Failure, GenerateArgs,
    QuantifyArgs, SegmenterArgs, SplitArgs,
};

/// Frames between running-average log lines in verbose mode.
const PROGRESS_EVERY: u64 = 100;

pub fn run(cli: Cli) -> Result<(), Failure> {
    let scheme = match &cli.classes {
        Some(path) => ClassScheme::from_json_file(path)
            .with_context(|| format!("loading class scheme {}", path.display()))?,
        None => ClassScheme::default(),
    };
    match cli.command {
        Command::Quantify(args) => quantify(args, &scheme, cli.verbose),
        Command::Evaluate(args) => evaluate(args, &scheme),
        Command::Compare(args) => compare(args),
        Command::Generate(args) => generate(args, &scheme),
        Command::Split(args) => split(args),
        Command::Bench(args) => bench(args, &scheme),
        Command::Augment(args) => augment(args, &scheme),
    }
}

/// Input problems the user can fix by changing the invocation.
fn input_error(sub: &'static str, e: trenchcv::Error) -> Failure {
    match e {
        trenchcv::Error::EmptyDirectory { .. } | trenchcv::Error::SegmenterSpec(_) => {
            usage(sub, e.to_string())
        }
        other => Failure::Runtime(other.into()),
    }
}

fn require_dir(sub: &'static str, flag: &str, dir: &Path) -> Result<(), Failure> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(usage(
            sub,
            format!("{flag} {}: no such directory", dir.display()),
        ))
    }
}

fn parse_format(s: &str) -> Format {
    s.parse().expect("clap restricts format values")
}

fn open_sequence(sub: &'static str, frames: &Path) -> Result<FrameSequence, Failure> {
    require_dir(sub, "--frames", frames)?;
    scan_sequence(frames, None).map_err(|e| input_error(sub, e))
}

fn open_segmenter(
    sub: &'static str,
    args: &SegmenterArgs,
    scheme: &ClassScheme,
) -> Result<Box<dyn Segmenter + Send>, Failure> {
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err(usage(
            sub,
            format!("--timeout {} must be positive", args.timeout),
        ));
    }
    let spec = SegmenterSpec::parse(&args.segmenter).map_err(|e| input_error(sub, e))?;
    if let SegmenterSpec::Oracle { masks_dir } = &spec {
        require_dir(sub, "oracle masks", masks_dir)?;
    }
    spec.build(scheme, Duration::from_secs_f64(args.timeout))
        .map_err(|e| input_error(sub, e))
}

fn quantify(args: QuantifyArgs, scheme: &ClassScheme, verbose: bool) -> Result<(), Failure> {
    let sequence = open_sequence("quantify", &args.frames)?;
    let mut segmenter = open_segmenter("quantify", &args.seg, scheme)?;
    let name = match args.name {
        Some(n) => n,
        None => args
            .frames
            .canonicalize()
            .ok()
            .and_then(|p| default_name(&p))
            .unwrap_or_else(|| "run".to_owned()),
    };
    info!("quantify {name}: {} frames", sequence.len());
    let summary = pipeline::quantify(&name, &sequence, &mut segmenter, scheme, |n, avg| {
        if verbose && n % PROGRESS_EVERY == 0 {
            eprintln!("[{n} frames] {}", running(avg, scheme));
        }
    })?;
    deliver(
        args.out.as_deref(),
        &emit_summary(&summary, parse_format(&args.format)),
    )?;
    Ok(())
}

/// Directory name of the frames, or of the dataset for `DATASET/frames`.
fn default_name(frames: &Path) -> Option<String> {
    let last = frames.file_name()?;
    let named = if last == FRAMES_SUBDIR {
        frames.parent()?.file_name()?
    } else {
        last
    };
    Some(named.to_string_lossy().into_owned())
}

fn running(avg: &CumulativeAverager, scheme: &ClassScheme) -> String {
    match avg.value() {
        Ok(values) => scheme
            .names()
            .iter()
            .zip(values)
            .map(|(name, v)| format!("{name} {}%", fmt_2dp(v)))
            .collect::<Vec<_>>()
            .join("  "),
        Err(e) => e.to_string(),
    }
}

fn evaluate(args: EvaluateArgs, scheme: &ClassScheme) -> Result<(), Failure> {
    require_dir("evaluate", "--pred", &args.pred)?;
    require_dir("evaluate", "--gt", &args.gt)?;
    let report = pipeline::evaluate_dirs(&args.name, &args.pred, &args.gt, scheme)
        .map_err(|e| input_error("evaluate", e))?;
    deliver(
        args.out.as_deref(),
        &report.emit(parse_format(&args.format)),
    )?;
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    let mut seen = HashSet::new();
    let mut rows = Vec::with_capacity(args.runs.len());
    for (name, path) in &args.runs {
        if !seen.insert(name.as_str()) {
            return Err(usage("compare", format!("duplicate run name {name:?}")));
        }
        let mut summary = RunSummary::load(path).with_context(|| format!("loading run {name}"))?;
        summary.name = name.clone();
        rows.push(summary);
    }
    let table = ComparisonTable::new(rows)?;
    deliver(
        args.out.as_deref(),
        &emit(&table, parse_format(&args.format)),
    )?;
    Ok(())
}

fn generate(args: GenerateArgs, scheme: &ClassScheme) -> Result<(), Failure> {
    if scheme != &ClassScheme::default() {
        return Err(usage(
            "generate",
            "synthetic scenes use the default background/soil/straw scheme",
        ));
    }
    let params = SceneParams {
        width: args.width,
        height: args.height,
        target_straw_fraction: args.straw,
        machinery_band_rows: args.band,
        noise_amplitude: args.noise,
        ..SceneParams::default()
    };
    params
        .validate()
        .map_err(|e| usage("generate", e.to_string()))?;
    if args.n == 0 {
        return Err(usage("generate", "--n must be at least 1"));
    }
    let manifest = generate_dataset(args.n, &params, args.seed, &args.out)?;
    info!("wrote {} scenes to {}", manifest.len(), args.out.display());
    Ok(())
}

fn split(args: SplitArgs) -> Result<(), Failure> {
    if !(args.ratio > 0.0 && args.ratio < 1.0) {
        return Err(usage(
            "split",
            format!("--ratio {} must lie strictly between 0 and 1", args.ratio),
        ));
    }
    let manifest = Manifest::load(&args.manifest)?;
    let split = split_dataset(&manifest, args.ratio, args.seed)?;
    info!(
        "{} train, {} validation",
        split.train.len(),
        split.validation.len()
    );
    let mut text = serde_json::to_string_pretty(&split).context("serializing split")?;
    text.push('\n');
    deliver(args.out.as_deref(), &text)?;
    Ok(())
}

fn bench(args: BenchArgs, scheme: &ClassScheme) -> Result<(), Failure> {
    let sequence = open_sequence("bench", &args.frames)?;
    let mut report = match &args.out {
        Some(path) => {
            if !path.is_file() {
                return Err(usage(
                    "bench",
                    format!("--out {}: run report not found", path.display()),
                ));
            }
            Some(RunSummary::load(path)?)
        }
        None => None,
    };
    let mut segmenter = open_segmenter("bench", &args.seg, scheme)?;
    let stats = pipeline::bench(&sequence, &mut segmenter)?;
    let timing = TimingSummary::from(&stats);
    eprintln!(
        "{} frames: mean {} ms  median {} ms  p95 {} ms",
        timing.samples,
        fmt_2dp(timing.mean_ms),
        fmt_2dp(timing.median_ms),
        fmt_2dp(timing.p95_ms)
    );
    match (&args.out, report.as_mut()) {
        (Some(path), Some(report)) => {
            report.timing = Some(timing);
            write_atomic(path, &report.to_json())?;
        }
        _ => {
            let mut text = serde_json::to_string_pretty(&timing).context("serializing timing")?;
            text.push('\n');
            deliver(None, &text)?;
        }
    }
    Ok(())
}

fn augment(args: AugmentArgs, scheme: &ClassScheme) -> Result<(), Failure> {
    require_dir("augment", "--frames", &args.frames)?;
    require_dir("augment", "--masks", &args.masks)?;
    let plan = if args.transforms.is_empty() {
        if args.copies == 0 {
            return Err(usage("augment", "--copies must be at least 1"));
        }
        AugmentPlan::Random {
            copies: args.copies,
            seed: args.seed,
        }
    } else {
        let transforms = args
            .transforms
            .iter()
            .map(|t| t.parse::<Transform>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage("augment", e.to_string()))?;
        AugmentPlan::Fixed(transforms)
    };
    let sequence =
        scan_sequence(&args.frames, Some(&args.masks)).map_err(|e| input_error("augment", e))?;
    let written = augment_dataset(&sequence, scheme, &plan, &args.out)?;
    for (stem, transform) in &written {
        info!("{stem}: {transform}");
    }
    info!("wrote {} pairs to {}", written.len(), args.out.display());
    Ok(())
}
