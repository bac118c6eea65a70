//! `tvkit`: synthesize corpora, compute tract variables, build acoustic
//! features and score predictions.
//!
//! Exit status: 0 on success, 2 on validation failures (including bad
//! flags), 3 on I/O failures. Logs go to standard error; data only to files
//! and, for `evaluate` and `compare`, a summary on standard output.

mod pipeline;
mod scoring;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvkit::eval::{DatasetTag, EvalMode};
use tvkit::tract::CollinearPolicy;
use tvkit::{Error, FeatureKind, PipelineConfig, Result, Variant};

#[derive(Parser, Debug)]
#[command(name = "tvkit", version, about = "Tract-variable extraction and speech-inversion evaluation")]
struct Cli {
    /// TOML pipeline config; values in it override the matching flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic corpus with analytically known TVs.
    Synth(SynthArgs),
    /// Convert pellet trajectories into TV tracks.
    Transform(TransformArgs),
    /// Build segmented feature matrices from audio or SSL embeddings.
    Featurize(FeaturizeArgs),
    /// Resample TV tracks onto a feature frame rate.
    Align(AlignArgs),
    /// Draw a seeded speaker-independent train/dev/test split.
    Split(SplitArgs),
    /// Score predicted TV tracks against ground truth.
    Evaluate(EvaluateArgs),
    /// Tabulate reports and print average improvements.
    Compare(CompareArgs),
    /// Write a truth/prediction overlay CSV for one utterance.
    PlotData(PlotDataArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Output directory for the corpus.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    speakers: usize,
    #[arg(long, default_value_t = 3)]
    utterances: usize,
    /// Utterance duration in seconds.
    #[arg(long, default_value_t = 5.0)]
    duration: f64,
    /// Pellet sampling rate in Hz.
    #[arg(long, default_value_t = 145.0)]
    pellet_rate: f64,
    /// Probability of flagging each pellet sample as mistracked.
    #[arg(long, default_value_t = 0.0)]
    mistrack_rate: f64,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Corpus root holding `pellets/` and `palate/`.
    #[arg(long)]
    data_root: Option<PathBuf>,
    /// Directory for the TV CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "proposed")]
    variant: Variant,
    /// Extend each palate trace before the transformation.
    #[arg(long, requires = "wall_x")]
    extend_palate: bool,
    /// Pharyngeal wall x in mm (with --extend-palate).
    #[arg(long, allow_hyphen_values = true)]
    wall_x: Option<f64>,
    /// Length of the vertical wall segment in mm (with --extend-palate).
    #[arg(long, default_value_t = 30.0)]
    wall_drop: f64,
    /// Distance resolution in mm.
    #[arg(long, default_value_t = 0.05)]
    resolution: f64,
    /// Behaviour when T2, T3 and T4 are collinear.
    #[arg(long, value_enum, default_value = "polyline-fallback")]
    collinear: CollinearArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum CollinearArg {
    EmitSentinel,
    PolylineFallback,
}

impl From<CollinearArg> for CollinearPolicy {
    fn from(a: CollinearArg) -> Self {
        match a {
            CollinearArg::EmitSentinel => CollinearPolicy::EmitSentinel,
            CollinearArg::PolylineFallback => CollinearPolicy::PolylineFallback,
        }
    }
}

#[derive(Args, Debug)]
struct FeaturizeArgs {
    /// `mfcc` reads WAV files, `ssl` reads 1024-column feature matrices.
    #[arg(long, default_value = "mfcc")]
    kind: FeatureKind,
    /// Input files or directories (directories are scanned for .wav/.ftm).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AlignArgs {
    /// Directory of TV CSVs.
    #[arg(long)]
    input: PathBuf,
    /// Target frame rate in Hz.
    #[arg(long)]
    rate: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SplitArgs {
    /// Corpus manifest supplying speaker ids and sex labels.
    #[arg(long, conflicts_with = "speakers")]
    manifest: Option<PathBuf>,
    /// CSV of `speaker,sex` lines (sex M or F).
    #[arg(long)]
    speakers: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    dev_male: usize,
    #[arg(long, default_value_t = 2)]
    dev_female: usize,
    #[arg(long, default_value_t = 3)]
    test_male: usize,
    #[arg(long, default_value_t = 2)]
    test_female: usize,
    /// Output split JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Partition {
    Train,
    Dev,
    Test,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Directory of predicted TV CSVs.
    #[arg(long)]
    pred: PathBuf,
    /// Directory of ground-truth TV CSVs.
    #[arg(long)]
    truth: PathBuf,
    /// Output report JSON.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "concatenated")]
    mode: EvalMode,
    /// Dataset label stored in the report.
    #[arg(long, default_value = "other")]
    dataset: DatasetTag,
    /// Feature kind label stored in the report.
    #[arg(long, default_value = "mfcc")]
    feature_kind: FeatureKind,
    /// Restrict scoring to one partition of this split.
    #[arg(long, requires = "partition")]
    split: Option<PathBuf>,
    #[arg(long, value_enum, requires = "split")]
    partition: Option<Partition>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Report JSON files; improvements are relative to the first.
    #[arg(required = true, num_args = 2..)]
    reports: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotDataArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// Picks the config value when present, else the flag.
fn pick<T>(from_config: Option<T>, flag: T) -> T {
    from_config.unwrap_or(flag)
}

fn required(value: Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    value.ok_or_else(|| Error::invalid("arguments", format!("--{flag} is required (flag or config)")))
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(p) => {
            let cfg = PipelineConfig::load(p)?;
            cfg.check_paths()?;
            log::info!("loaded config {}", p.display());
            Ok(cfg)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Synth(a) => pipeline::synth(&cfg, a),
        Command::Transform(a) => pipeline::transform(&cfg, a),
        Command::Featurize(a) => pipeline::featurize(&cfg, a),
        Command::Align(a) => pipeline::align(a),
        Command::Split(a) => scoring::split(&cfg, a),
        Command::Evaluate(a) => scoring::evaluate(&cfg, a),
        Command::Compare(a) => scoring::compare(a),
        Command::PlotData(a) => scoring::plot_data(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(if e.is_io() { 3 } else { 2 })
        }
    }
}
