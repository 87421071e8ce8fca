use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use ddhqa::evaluation::{run_cross_validation, CvConfig, EvaluationReport, MetricOptions};
use ddhqa::regression::QualityModel;
use serde::Serialize;

use crate::config::{self, create_dir, existing, RunConfig};
use crate::dataset::{attach_mos, load_features};
use crate::{sidecar, write_meta, Meta};

pub struct DataPaths {
    gf: PathBuf,
    clips: PathBuf,
    manifest: Option<PathBuf>,
}

impl DataPaths {
    pub fn resolve(
        gf: &Option<PathBuf>,
        clips: &Option<PathBuf>,
        manifest: &Option<PathBuf>,
        config: &RunConfig,
    ) -> anyhow::Result<DataPaths> {
        Ok(DataPaths {
            gf: existing(config::require(gf, &config.paths.gf, "gf")?)?,
            clips: existing(config::require(clips, &config.paths.clips, "clips")?)?,
            manifest: manifest
                .clone()
                .or_else(|| config.paths.manifest.clone())
                .map(existing)
                .transpose()?,
        })
    }
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn train(
    paths: &DataPaths,
    mos: &Path,
    out_dir: &Path,
    config: &RunConfig,
) -> anyhow::Result<()> {
    let features = load_features(&paths.gf, &paths.clips, paths.manifest.as_deref())?;
    let (dims, videos) = attach_mos(features, mos)?;
    let (model, curve) = QualityModel::fit(
        &videos,
        dims,
        &config.training,
        config.evaluation.clip_target,
    )?;

    create_dir(out_dir)?;
    write_json(&out_dir.join("head.json"), &model)?;
    let mut csv = String::from("epoch,loss\n");
    for (epoch, loss) in curve.iter().enumerate() {
        csv.push_str(&format!("{},{loss}\n", epoch + 1));
    }
    write_text(&out_dir.join("loss_curve.csv"), &csv)?;
    let meta = Meta {
        seed: Some(config.training.seed),
        dims: Some(dims),
        training: Some(&config.training),
        evaluation: Some(&config.evaluation),
        ..Meta::new("train")
    };
    write_meta(&out_dir.join("run.json"), &meta)?;
    eprintln!(
        "trained on {} videos; final loss {:.6}; wrote {}",
        videos.len(),
        curve.last().copied().unwrap_or(f64::NAN),
        out_dir.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct ReportArtifact<'a> {
    #[serde(flatten)]
    meta: Meta<'a>,
    report: &'a EvaluationReport,
}

pub fn evaluate(
    paths: &DataPaths,
    mos: &Path,
    out_dir: &Path,
    config: &RunConfig,
) -> anyhow::Result<()> {
    let features = load_features(&paths.gf, &paths.clips, paths.manifest.as_deref())?;
    let (dims, videos) = attach_mos(features, mos)?;
    let cv = CvConfig {
        seed: config.evaluation.seed,
        allow_any_even_groups: config.evaluation.allow_any_even_groups,
        metrics: MetricOptions {
            logistic: config.evaluation.logistic,
        },
    };
    let report = run_cross_validation(
        &videos,
        dims,
        &config.training,
        config.evaluation.clip_target,
        &cv,
    )?;

    create_dir(out_dir)?;
    let meta = Meta {
        seed: Some(config.training.seed),
        dims: Some(dims),
        training: Some(&config.training),
        evaluation: Some(&config.evaluation),
        ..Meta::new("evaluate")
    };
    write_json(
        &out_dir.join("report.json"),
        &ReportArtifact {
            meta,
            report: &report,
        },
    )?;
    write_text(&out_dir.join("report.csv"), &report.to_csv())?;
    let mut predictions = String::from("fold,video_id,predicted,mos\n");
    for fold in &report.folds {
        for p in &fold.predictions {
            predictions.push_str(&format!(
                "{},{},{},{}\n",
                fold.fold_id, p.video_id, p.predicted, p.mos
            ));
        }
    }
    write_text(&out_dir.join("predictions.csv"), &predictions)?;
    let meta = Meta {
        seed: Some(config.training.seed),
        dims: Some(dims),
        training: Some(&config.training),
        evaluation: Some(&config.evaluation),
        ..Meta::new("evaluate")
    };
    write_meta(&out_dir.join("run.json"), &meta)?;

    let mut stdout = std::io::stdout().lock();
    write!(stdout, "{}", report.to_table())?;
    writeln!(
        stdout,
        "median SRCC {:.4}; {}",
        report.median_srcc(),
        report.score_scale
    )?;
    Ok(())
}

pub fn predict(paths: &DataPaths, model_path: &Path, out: &Path) -> anyhow::Result<()> {
    let file =
        File::open(model_path).with_context(|| format!("cannot open {}", model_path.display()))?;
    let model = QualityModel::read_json(BufReader::new(file))
        .with_context(|| format!("in {}", model_path.display()))?;
    let features = load_features(&paths.gf, &paths.clips, paths.manifest.as_deref())?;
    if features.dims != model.dims {
        anyhow::bail!(
            "clip features declare d_s={}, d_t={} but the model was trained with d_s={}, d_t={}",
            features.dims.d_s,
            features.dims.d_t,
            model.dims.d_s,
            model.dims.d_t
        );
    }

    let mut csv = String::from("video_id,score\n");
    for v in &features.videos {
        let score = model
            .predict(&v.gf, &v.clips)
            .with_context(|| format!("video {}", v.video_id))?;
        csv.push_str(&format!("{},{score}\n", v.video_id));
    }
    write_text(out, &csv)?;
    let meta = Meta {
        seed: Some(model.training.seed),
        dims: Some(model.dims),
        training: Some(&model.training),
        ..Meta::new("predict")
    };
    write_meta(&sidecar(out), &meta)?;
    eprintln!(
        "scored {} videos into {}",
        features.videos.len(),
        out.display()
    );
    Ok(())
}
