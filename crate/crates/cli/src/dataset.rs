//! Loading the interchange files and joining them by id.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use ddhqa::records::{
    read_clip_features, read_gf_records, read_manifest_csv, read_mos_csv, MosRecord,
};
use ddhqa::regression::{FeatureDims, VideoSample};
use ddhqa::{ClipFeatureRecord, GeometryFeatureVector};

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| {
        format!("cannot open {}", path.display())
    })?))
}

/// Ids that appear in one input but not in another it must join with.
#[derive(Debug, Default, PartialEq, thiserror::Error)]
pub struct JoinMismatch {
    pub models_without_manifest_entry: Vec<String>,
    pub videos_without_geometry: Vec<String>,
    pub videos_without_clips: Vec<String>,
    pub videos_without_mos: Vec<String>,
    pub duplicate_ids: Vec<String>,
}

impl JoinMismatch {
    fn is_empty(&self) -> bool {
        *self == JoinMismatch::default()
    }
}

impl fmt::Display for JoinMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inputs do not join:")?;
        for (label, ids) in [
            (
                "models missing from the manifest",
                &self.models_without_manifest_entry,
            ),
            (
                "videos without geometry features",
                &self.videos_without_geometry,
            ),
            ("videos without clip features", &self.videos_without_clips),
            ("videos without MOS", &self.videos_without_mos),
            ("duplicate ids", &self.duplicate_ids),
        ] {
            if !ids.is_empty() {
                write!(f, "\n  {label}: {}", ids.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Geometry and clip features for one video.
#[derive(Debug, Clone)]
pub struct VideoFeatures {
    pub video_id: String,
    pub gf: GeometryFeatureVector,
    pub clips: Vec<ClipFeatureRecord>,
}

pub struct FeatureInputs {
    pub dims: FeatureDims,
    /// Sorted by video id.
    pub videos: Vec<VideoFeatures>,
}

/// Reads GF records, clip features and the optional manifest, and joins
/// them by video id. Every video must have both kinds of features.
pub fn load_features(
    gf: &Path,
    clips: &Path,
    manifest: Option<&Path>,
) -> anyhow::Result<FeatureInputs> {
    let gf_records = read_gf_records(open(gf)?).with_context(|| format!("in {}", gf.display()))?;
    let (dims, clip_records) =
        read_clip_features(open(clips)?).with_context(|| format!("in {}", clips.display()))?;
    let manifest = match manifest {
        Some(p) => {
            Some(read_manifest_csv(open(p)?).with_context(|| format!("in {}", p.display()))?)
        }
        None => None,
    };

    let mut mismatch = JoinMismatch::default();
    let mapping: Option<BTreeMap<String, String>> = manifest.map(|rows| {
        let mut map = BTreeMap::new();
        for r in rows {
            if map.insert(r.model_id.clone(), r.video_id).is_some() {
                mismatch.duplicate_ids.push(r.model_id);
            }
        }
        map
    });

    let mut geometry: BTreeMap<String, GeometryFeatureVector> = BTreeMap::new();
    for r in gf_records {
        let video_id = match &mapping {
            Some(map) => match map.get(&r.model_id) {
                Some(v) => v.clone(),
                None => {
                    mismatch.models_without_manifest_entry.push(r.model_id);
                    continue;
                }
            },
            None => r.model_id.clone(),
        };
        if geometry.insert(video_id.clone(), r.gf).is_some() {
            mismatch.duplicate_ids.push(video_id);
        }
    }

    let mut by_video: BTreeMap<String, Vec<ClipFeatureRecord>> = BTreeMap::new();
    for c in clip_records {
        by_video.entry(c.video_id.clone()).or_default().push(c);
    }
    for (video, clips) in &by_video {
        let distinct: BTreeSet<usize> = clips.iter().map(|c| c.clip_index).collect();
        if distinct.len() != clips.len() {
            mismatch.duplicate_ids.push(format!("{video} (clip index)"));
        }
    }

    mismatch.videos_without_clips = geometry
        .keys()
        .filter(|v| !by_video.contains_key(*v))
        .cloned()
        .collect();
    mismatch.videos_without_geometry = by_video
        .keys()
        .filter(|v| !geometry.contains_key(*v))
        .cloned()
        .collect();
    if !mismatch.is_empty() {
        return Err(mismatch.into());
    }

    let videos = geometry
        .into_iter()
        .map(|(video_id, gf)| {
            let clips = by_video.remove(&video_id).unwrap_or_default();
            VideoFeatures {
                video_id,
                gf,
                clips,
            }
        })
        .collect();
    Ok(FeatureInputs { dims, videos })
}

/// Attaches MOS and motion group to every video. Any video without a MOS
/// row, or MOS row without a video, is a join mismatch.
pub fn attach_mos(
    features: FeatureInputs,
    mos: &Path,
) -> anyhow::Result<(FeatureDims, Vec<VideoSample>)> {
    let rows = read_mos_csv(open(mos)?).with_context(|| format!("in {}", mos.display()))?;
    let mut mismatch = JoinMismatch::default();
    let mut table: BTreeMap<String, MosRecord> = BTreeMap::new();
    for r in rows {
        if let Some(old) = table.insert(r.video_id.clone(), r) {
            mismatch.duplicate_ids.push(old.video_id);
        }
    }
    let known: BTreeSet<&str> = features
        .videos
        .iter()
        .map(|v| v.video_id.as_str())
        .collect();
    mismatch.videos_without_mos = features
        .videos
        .iter()
        .filter(|v| !table.contains_key(&v.video_id))
        .map(|v| v.video_id.clone())
        .collect();
    // MOS rows for videos with no features at all
    mismatch.videos_without_geometry = table
        .keys()
        .filter(|v| !known.contains(v.as_str()))
        .cloned()
        .collect();
    if !mismatch.is_empty() {
        return Err(mismatch.into());
    }

    let samples = features
        .videos
        .into_iter()
        .map(|v| {
            let row = &table[&v.video_id];
            VideoSample {
                video_id: v.video_id,
                group_id: row.group_id.clone(),
                gf: v.gf,
                clips: v.clips,
                mos: row.mos,
            }
        })
        .collect();
    Ok((features.dims, samples))
}
