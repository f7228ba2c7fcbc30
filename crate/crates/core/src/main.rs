use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eegaug::eabf::{parse_header, read_dataset, write_dataset};
use eegaug::harness::{
    dyadic_fractions, generate_synthetic, grid_search, learning_curve, linspace,
    per_class_report, ProtocolConfig, Splitter, SynthConfig, TrainConfig,
};
use eegaug::{apply_policy, preset, Error, Policy};

/// Deterministic EEG data augmentation and evaluation protocols.
#[derive(Debug, Parser)]
#[command(name = "eegaug", version)]
struct Cli {
    /// Worker threads (default: all logical cores).
    #[arg(long, global = true, env = "EEGAUG_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a labelled synthetic dataset and write it as EABF.
    Synth(SynthArgs),
    /// Apply an augmentation policy to every window of a dataset.
    Augment(AugmentArgs),
    /// Relative improvement of one transform over a grid of magnitudes.
    Gridsearch(GridArgs),
    /// Accuracy with and without a policy over growing training fractions.
    LearningCurve(CurveArgs),
    /// Per-class F1 with and without a policy on class-balanced data.
    PerClass(PerClassArgs),
    /// Print the header of an EABF file.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 4)]
    classes: usize,
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    #[arg(long, default_value_t = 22)]
    channels: usize,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 128.0)]
    sfreq: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    subjects: usize,
    /// Oscillation to background power ratio in dB.
    #[arg(long, default_value_t = -15.0, allow_hyphen_values = true)]
    snr_db: f64,
    /// Per-subject frequency jitter half-width in Hz.
    #[arg(long, default_value_t = 0.5)]
    jitter_hz: f64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "policy_source", required = true, multiple = false)]
struct PolicySource {
    /// Built-in policy: sleep or bci.
    #[arg(long, group = "policy_source")]
    preset: Option<String>,
    /// Policy JSON file.
    #[arg(long, group = "policy_source")]
    policy: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    source: PolicySource,
    /// Overrides the policy seed.
    #[arg(long)]
    seed: u64,
    /// Overrides the policy epoch.
    #[arg(long)]
    epoch: Option<u64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ProtocolArgs {
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Seeds the splits and the augmentation policy.
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SplitterArg::SubjectFolds)]
    splitter: SplitterArg,
    /// Stratified cap on training windows per fold.
    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long, default_value_t = TrainConfig::default().epochs)]
    epochs: usize,
    #[arg(long, default_value_t = TrainConfig::default().steps_per_epoch)]
    steps_per_epoch: usize,
    #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
    learning_rate: f64,
    #[arg(long, default_value_t = TrainConfig::default().l2)]
    l2: f64,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum SplitterArg {
    SubjectFolds,
    Session,
}

impl ProtocolArgs {
    fn config(&self) -> ProtocolConfig {
        ProtocolConfig {
            folds: self.folds,
            split_seed: self.seed,
            splitter: match self.splitter {
                SplitterArg::SubjectFolds => Splitter::SubjectFolds,
                SplitterArg::Session => Splitter::Session,
            },
            train_size: self.train_size,
            train: TrainConfig {
                epochs: self.epochs,
                steps_per_epoch: self.steps_per_epoch,
                learning_rate: self.learning_rate,
                l2: self.l2,
            },
        }
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Transform name, e.g. gaussian-noise.
    #[arg(long)]
    aug: String,
    #[arg(long, allow_hyphen_values = true)]
    min: f64,
    #[arg(long, allow_hyphen_values = true)]
    max: f64,
    #[arg(long, default_value_t = 11)]
    points: usize,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Report CSV path; the JSON summary goes next to it.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    source: PolicySource,
    /// Comma-separated ascending fractions (default: 8 dyadic points up to 1).
    #[arg(long, value_delimiter = ',')]
    fractions: Option<Vec<f64>>,
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct PerClassArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    source: PolicySource,
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[arg(short, long)]
    input: PathBuf,
}

fn load_policy(source: &PolicySource, seed: u64, epoch: Option<u64>) -> eegaug::Result<Policy> {
    let mut policy = match (&source.preset, &source.policy) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Policy::from_json(&text)?
        }
        (None, None) => unreachable!("clap requires one policy source"),
    };
    policy.seed = seed;
    if let Some(e) = epoch {
        policy.epoch = e;
    }
    policy.validate()?;
    Ok(policy)
}

fn inspect(path: &Path) -> eegaug::Result<()> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let (h, _) = parse_header(&bytes)?;
    let mut counts = std::collections::BTreeMap::new();
    for &l in &h.labels {
        *counts.entry(l).or_insert(0usize) += 1;
    }
    let mut subjects = h.subjects.clone();
    subjects.sort_unstable();
    subjects.dedup();
    println!("format: EABF v1");
    println!("windows: {}", h.n_windows);
    println!("channels: {}", h.n_channels);
    println!("samples: {}", h.n_samples);
    println!("sfreq_hz: {}", h.sfreq_hz);
    println!("channel_names: {}", h.channel_names.join(","));
    println!("positions: {}", if h.channel_positions.is_some() { "yes" } else { "no" });
    let classes: Vec<String> = counts.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    println!("class_counts: {}", classes.join(","));
    println!("subjects: {}", subjects.len());
    Ok(())
}

fn run(cli: Cli) -> eegaug::Result<()> {
    match cli.command {
        Command::Synth(a) => {
            let cfg = SynthConfig {
                n_classes: a.classes,
                n_per_class: a.per_class,
                n_channels: a.channels,
                n_samples: a.samples,
                sfreq: a.sfreq,
                seed: a.seed,
                n_subjects: a.subjects,
                snr_db: a.snr_db,
                subject_jitter_hz: a.jitter_hz,
            };
            write_dataset(&generate_synthetic(&cfg)?, &a.output)
        }
        Command::Augment(a) => {
            let d = read_dataset(&a.input)?;
            let policy = load_policy(&a.source, a.seed, a.epoch)?;
            write_dataset(&apply_policy(&policy, &d)?, &a.output)
        }
        Command::Gridsearch(a) => {
            if a.points == 0 {
                return Err(Error::Config("--points must be at least 1".into()));
            }
            let d = read_dataset(&a.input)?;
            let grid = linspace(a.min, a.max, a.points);
            let cfg = a.protocol.config();
            grid_search(&d, &a.aug, &grid, &cfg, a.protocol.seed)?.write(&a.output)
        }
        Command::LearningCurve(a) => {
            let d = read_dataset(&a.input)?;
            let policy = load_policy(&a.source, a.protocol.seed, None)?;
            let fractions = a.fractions.unwrap_or_else(|| dyadic_fractions(8));
            learning_curve(&d, &policy, &fractions, &a.protocol.config())?.write(&a.output)
        }
        Command::PerClass(a) => {
            let d = read_dataset(&a.input)?;
            let policy = load_policy(&a.source, a.protocol.seed, None)?;
            per_class_report(&d, &policy, &a.protocol.config())?.write(&a.output)
        }
        Command::Inspect(a) => inspect(&a.input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("eegaug: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        let built = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        if let Err(e) = built {
            eprintln!("eegaug: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eegaug: {}", e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
