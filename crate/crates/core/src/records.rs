//! Line-oriented interchange files.
//!
//! - geometry features: JSON lines `{"model_id": .., "gf": [22 floats]}`
//! - clip features: a header line `{"d_s": .., "d_t": ..}` followed by one
//!   `{"video_id": .., "clip_index": .., "sf": [..], "tf": [..]}` per clip
//! - MOS table: CSV `video_id,mos,group_id`
//! - manifest: CSV `model_id,video_id`, used when mesh and video ids differ

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryFeatureVector;
use crate::regression::{ClipFeatureRecord, FeatureDims};

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

fn line_err(line: usize, message: impl Into<String>) -> RecordError {
    RecordError::Line {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GfRecord {
    pub model_id: String,
    pub gf: GeometryFeatureVector,
}

pub fn write_gf_records<W: Write>(mut w: W, records: &[GfRecord]) -> Result<(), RecordError> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_gf_records<R: BufRead>(r: R) -> Result<Vec<GfRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: GfRecord =
            serde_json::from_str(&line).map_err(|e| line_err(i + 1, e.to_string()))?;
        if rec.gf.values().iter().any(|v| !v.is_finite()) {
            return Err(line_err(i + 1, "non-finite geometry feature"));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_clip_features<W: Write>(
    mut w: W,
    dims: FeatureDims,
    records: &[ClipFeatureRecord],
) -> Result<(), RecordError> {
    serde_json::to_writer(&mut w, &dims).map_err(std::io::Error::from)?;
    w.write_all(b"\n")?;
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a clip feature file, checking every record against the header's
/// declared dimensions.
pub fn read_clip_features<R: BufRead>(
    r: R,
) -> Result<(FeatureDims, Vec<ClipFeatureRecord>), RecordError> {
    let mut lines = r.lines().enumerate().filter(|(_, l)| match l {
        Ok(l) => !l.trim().is_empty(),
        Err(_) => true,
    });
    let (i, header) = lines
        .next()
        .ok_or_else(|| line_err(1, "missing header record"))?;
    let dims: FeatureDims =
        serde_json::from_str(&header?).map_err(|e| line_err(i + 1, format!("bad header: {e}")))?;

    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let rec: ClipFeatureRecord =
            serde_json::from_str(&line).map_err(|e| line_err(i + 1, e.to_string()))?;
        rec.validate(dims)
            .map_err(|e| line_err(i + 1, e.to_string()))?;
        out.push(rec);
    }
    Ok((dims, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosRecord {
    pub video_id: String,
    pub mos: f64,
    pub group_id: String,
}

pub fn read_mos_csv<R: std::io::Read>(r: R) -> Result<Vec<MosRecord>, RecordError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    for (i, rec) in reader.deserialize::<MosRecord>().enumerate() {
        // header is line 1
        let rec = rec.map_err(|e| line_err(i + 2, e.to_string()))?;
        if !rec.mos.is_finite() {
            return Err(line_err(i + 2, "non-finite MOS"));
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_mos_csv<W: Write>(w: W, records: &[MosRecord]) -> Result<(), RecordError> {
    let mut writer = csv::Writer::from_writer(w);
    for r in records {
        writer.serialize(r).map_err(std::io::Error::other)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub model_id: String,
    pub video_id: String,
}

pub fn read_manifest_csv<R: std::io::Read>(r: R) -> Result<Vec<ManifestRecord>, RecordError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    reader
        .deserialize::<ManifestRecord>()
        .enumerate()
        .map(|(i, rec)| rec.map_err(|e| line_err(i + 2, e.to_string())))
        .collect()
}
