//! `ddhqa`: batch front end for geometry feature extraction, training,
//! cross-validated evaluation and prediction.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

mod commands;
mod config;
mod dataset;
mod extract;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ddhqa::geometry::AreaMode;
use ddhqa::regression::FeatureDims;
use ddhqa::TrainingConfig;
use serde::Serialize;

use config::{EvaluationOptions, GeometryOptions, RunConfig};

/// Bad invocation: missing arguments, unreadable config, nothing to do.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// Provenance written next to (or into) every artifact.
#[derive(Debug, Serialize)]
pub struct Meta<'a> {
    pub tool_version: &'static str,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<FeatureDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<&'a GeometryOptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub training: Option<&'a TrainingConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<&'a EvaluationOptions>,
}

impl<'a> Meta<'a> {
    pub fn new(command: &'a str) -> Self {
        Meta {
            tool_version: ddhqa::TOOL_VERSION,
            command,
            seed: None,
            dims: None,
            geometry: None,
            training: None,
            evaluation: None,
        }
    }
}

/// `<path>.meta.json`
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_meta(path: &Path, meta: &Meta<'_>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "ddhqa",
    version,
    about = "Mesh geometry features, quality regression and evaluation"
)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the 22 geometry features of each mesh.
    ExtractGeometry(ExtractArgs),
    /// Train a regression head on all videos.
    Train(TrainArgs),
    /// Motion-group cross-validation.
    Evaluate(EvaluateArgs),
    /// Score videos with a trained head.
    Predict(PredictArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AreaArg {
    Mixed,
    Barycentric,
}

#[derive(Args)]
struct ExtractArgs {
    /// Mesh files (.obj or ASCII .ply).
    meshes: Vec<PathBuf>,
    /// Also process every mesh file in this directory.
    #[arg(long)]
    mesh_dir: Option<PathBuf>,
    /// GF records output (JSON lines).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-file warnings and failures, JSON lines. Defaults to `<out>.log.jsonl`.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, value_enum)]
    area: Option<AreaArg>,
    /// Write 256-bin dihedral and curvature histograms as CSV into this directory.
    #[arg(long)]
    dump_histogram: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// GF records (JSON lines).
    #[arg(long)]
    gf: Option<PathBuf>,
    /// Clip feature file (JSON lines with a dimension header).
    #[arg(long)]
    clips: Option<PathBuf>,
    /// CSV `model_id,video_id`, when mesh and video ids differ.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct TrainingArgs {
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    hidden_dim: Option<usize>,
    /// Seeds head initialization and batch order.
    #[arg(long)]
    seed: Option<u64>,
    /// Clips sampled per video.
    #[arg(long)]
    clip_target: Option<usize>,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    inputs: InputArgs,
    /// CSV `video_id,mos,group_id`.
    #[arg(long)]
    mos: Option<PathBuf>,
    #[command(flatten)]
    training: TrainingArgs,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    inputs: InputArgs,
    #[arg(long)]
    mos: Option<PathBuf>,
    #[command(flatten)]
    training: TrainingArgs,
    /// Seeds the fold assignment.
    #[arg(long)]
    fold_seed: Option<u64>,
    /// Map predictions through a fitted 4-parameter logistic before PLCC and RMSE.
    #[arg(long)]
    logistic: bool,
    /// Accept any even number of motion groups instead of exactly 10.
    #[arg(long)]
    allow_any_even_groups: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained head (`head.json` from `train`).
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    inputs: InputArgs,
    /// Scores CSV `video_id,score`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn apply_training(config: &mut RunConfig, args: &TrainingArgs) {
    let t = &mut config.training;
    if let Some(v) = args.learning_rate {
        t.learning_rate = v;
    }
    if let Some(v) = args.epochs {
        t.epochs = v;
    }
    if let Some(v) = args.batch_size {
        t.batch_size = v;
    }
    if let Some(v) = args.hidden_dim {
        t.hidden_dim = v;
    }
    if let Some(v) = args.seed {
        t.seed = v;
    }
    if let Some(v) = args.clip_target {
        config.evaluation.clip_target = v;
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::ExtractGeometry(args) => {
            if let Some(area) = args.area {
                config.geometry.area = match area {
                    AreaArg::Mixed => AreaMode::Mixed,
                    AreaArg::Barycentric => AreaMode::Barycentric,
                };
            }
            if args.dump_histogram.is_some() {
                config.geometry.dump_histogram = args.dump_histogram;
            }
            let mut meshes = args.meshes;
            if let Some(dir) = args.mesh_dir.or(config.paths.mesh_dir.clone()) {
                meshes.extend(extract::meshes_in(&dir)?);
            }
            let out = config::require(&args.out, &config.paths.gf, "out")?;
            let log = args.log.unwrap_or_else(|| {
                let mut name = out.as_os_str().to_owned();
                name.push(".log.jsonl");
                PathBuf::from(name)
            });
            let meta = Meta {
                geometry: Some(&config.geometry),
                ..Meta::new("extract-geometry")
            };
            let summary = extract::run(&meshes, &out, &log, &config.geometry, &meta)?;
            eprintln!(
                "wrote {} records to {} ({} failed)",
                summary.succeeded,
                out.display(),
                summary.failed
            );
            Ok(())
        }
        Command::Train(args) => {
            apply_training(&mut config, &args.training);
            let paths = commands::DataPaths::resolve(
                &args.inputs.gf,
                &args.inputs.clips,
                &args.inputs.manifest,
                &config,
            )?;
            let mos = config::existing(config::require(&args.mos, &config.paths.mos, "mos")?)?;
            let out_dir = config::require(&args.out_dir, &config.paths.out_dir, "out-dir")?;
            commands::train(&paths, &mos, &out_dir, &config)
        }
        Command::Evaluate(args) => {
            apply_training(&mut config, &args.training);
            if let Some(seed) = args.fold_seed {
                config.evaluation.seed = seed;
            }
            config.evaluation.logistic |= args.logistic;
            config.evaluation.allow_any_even_groups |= args.allow_any_even_groups;
            let paths = commands::DataPaths::resolve(
                &args.inputs.gf,
                &args.inputs.clips,
                &args.inputs.manifest,
                &config,
            )?;
            let mos = config::existing(config::require(&args.mos, &config.paths.mos, "mos")?)?;
            let out_dir = config::require(&args.out_dir, &config.paths.out_dir, "out-dir")?;
            commands::evaluate(&paths, &mos, &out_dir, &config)
        }
        Command::Predict(args) => {
            let paths = commands::DataPaths::resolve(
                &args.inputs.gf,
                &args.inputs.clips,
                &args.inputs.manifest,
                &config,
            )?;
            let model =
                config::existing(config::require(&args.model, &config.paths.model, "model")?)?;
            let out = match (args.out, &config.paths.out_dir) {
                (Some(out), _) => out,
                (None, Some(dir)) => dir.join("scores.csv"),
                (None, None) => return Err(UsageError("missing --out".into()).into()),
            };
            commands::predict(&paths, &model, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
