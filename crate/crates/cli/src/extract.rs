use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use ddhqa::geometry::fit::ENTROPY_BINS;
use ddhqa::geometry::{
    extract_geometry_features, normalized_histogram, Family, FeatureConfig, FieldKind, FitWarning,
    GeometryFeatures,
};
use ddhqa::mesh::{parse_mesh, MeshFormat};
use ddhqa::records::{write_gf_records, GfRecord};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::GeometryOptions;
use crate::{sidecar, write_meta, Meta, UsageError};

/// One line of the machine-readable sidecar log.
#[derive(Debug, Serialize)]
struct LogEntry<'a> {
    level: &'a str,
    path: String,
    model_id: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
}

pub struct ExtractSummary {
    pub succeeded: usize,
    pub failed: usize,
}

/// Mesh files directly inside `dir` with a recognized extension, sorted.
pub fn meshes_in(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && MeshFormat::from_path(&path).is_ok() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn model_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn extract_one(path: &Path, config: &FeatureConfig) -> anyhow::Result<GeometryFeatures> {
    let format = MeshFormat::from_path(path)?;
    let mesh = parse_mesh(path, format)?;
    Ok(extract_geometry_features(&mesh, config)?)
}

fn write_histogram(dir: &Path, id: &str, features: &GeometryFeatures) -> anyhow::Result<()> {
    let path = dir.join(format!("{id}.histogram.csv"));
    let mut w = csv::Writer::from_path(&path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["field", "bin", "lower", "upper", "probability"])?;
    for (name, field) in [
        ("dihedral", &features.dihedral),
        ("curvature", &features.curvature),
    ] {
        for (i, b) in normalized_histogram(&field.values, ENTROPY_BINS)
            .iter()
            .enumerate()
        {
            w.write_record([
                name.to_string(),
                i.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                b.probability.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Extracts one GF record per mesh. Failures are logged and skipped; the run
/// fails only when no mesh succeeds.
pub fn run(
    meshes: &[PathBuf],
    out: &Path,
    log: &Path,
    options: &GeometryOptions,
    meta: &Meta<'_>,
) -> anyhow::Result<ExtractSummary> {
    if meshes.is_empty() {
        return Err(UsageError("no mesh files given".into()).into());
    }
    let ids: Vec<String> = meshes.iter().map(|p| model_id(p)).collect();
    let mut seen = BTreeSet::new();
    if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
        return Err(UsageError(format!("two input meshes share the model id `{dup}`")).into());
    }
    if let Some(dir) = &options.dump_histogram {
        crate::config::create_dir(dir)?;
    }

    let config = FeatureConfig {
        area_mode: options.area,
    };
    let results: Vec<anyhow::Result<GeometryFeatures>> = meshes
        .par_iter()
        .zip(&ids)
        .map(|(path, id)| {
            let features = extract_one(path, &config)?;
            if let Some(dir) = &options.dump_histogram {
                write_histogram(dir, id, &features)?;
            }
            Ok(features)
        })
        .collect();

    let mut records = Vec::new();
    let mut log_lines = Vec::new();
    let mut failed = 0;
    for ((path, id), result) in meshes.iter().zip(&ids).zip(results) {
        let shown = path.display().to_string();
        match result {
            Ok(features) => {
                for FitWarning {
                    field,
                    family,
                    message,
                } in &features.warnings
                {
                    log_lines.push(LogEntry {
                        level: "warning",
                        path: shown.clone(),
                        model_id: id,
                        message: message.clone(),
                        field: Some(*field),
                        family: Some(*family),
                    });
                }
                records.push(GfRecord {
                    model_id: id.clone(),
                    gf: features.vector,
                });
            }
            Err(e) => {
                failed += 1;
                eprintln!("skipping {shown}: {e:#}");
                log_lines.push(LogEntry {
                    level: "error",
                    path: shown,
                    model_id: id,
                    message: format!("{e:#}"),
                    field: None,
                    family: None,
                });
            }
        }
    }

    let mut log_file = BufWriter::new(
        File::create(log).with_context(|| format!("cannot write {}", log.display()))?,
    );
    for line in &log_lines {
        serde_json::to_writer(&mut log_file, line)?;
        log_file.write_all(b"\n")?;
    }
    log_file.flush()?;

    if records.is_empty() {
        anyhow::bail!(
            "none of the {} meshes could be processed (see {})",
            meshes.len(),
            log.display()
        );
    }
    let mut w = BufWriter::new(
        File::create(out).with_context(|| format!("cannot write {}", out.display()))?,
    );
    write_gf_records(&mut w, &records)?;
    w.flush()?;
    write_meta(&sidecar(out), meta)?;
    Ok(ExtractSummary {
        succeeded: records.len(),
        failed,
    })
}
