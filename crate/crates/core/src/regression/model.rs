use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::evaluation::cyclic_clip_sample;
use crate::geometry::GeometryFeatureVector;

use super::train::{train, FusedVideo, TrainingConfig};
use super::{
    fuse, ClipFeatureRecord, FeatureDims, FeatureStandardizer, RegressionError, RegressionHead,
};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Everything known about one video: its geometry features, clip features,
/// subjective score and motion group.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoSample {
    pub video_id: String,
    pub group_id: String,
    pub gf: GeometryFeatureVector,
    pub clips: Vec<ClipFeatureRecord>,
    pub mos: f64,
}

/// A trained head together with the feature standardization fitted on its
/// training videos and the settings needed to reproduce predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityModel {
    pub format_version: u32,
    pub tool_version: String,
    pub dims: FeatureDims,
    pub clip_target: usize,
    pub training: TrainingConfig,
    pub standardizer: FeatureStandardizer,
    pub head: RegressionHead,
}

/// Sampled, fused (unstandardized) clip vectors of one video.
fn fused_clips(
    gf: &GeometryFeatureVector,
    clips: &[ClipFeatureRecord],
    dims: FeatureDims,
    clip_target: usize,
) -> Result<Vec<Vec<f64>>, RegressionError> {
    let mut ordered: Vec<&ClipFeatureRecord> = clips.iter().collect();
    ordered.sort_by_key(|c| c.clip_index);
    let picks =
        cyclic_clip_sample(ordered.len(), clip_target).map_err(|_| RegressionError::NoClips)?;
    picks
        .into_iter()
        .map(|i| fuse(gf, ordered[i], dims))
        .collect()
}

impl QualityModel {
    /// Samples `clip_target` clips per video, fits the standardizer on the
    /// training clips, initializes a head from `training.seed` and trains it.
    /// Returns the model and its per-epoch loss.
    pub fn fit(
        videos: &[VideoSample],
        dims: FeatureDims,
        training: &TrainingConfig,
        clip_target: usize,
    ) -> Result<(QualityModel, Vec<f64>), RegressionError> {
        training.validate()?;
        if videos.is_empty() {
            return Err(RegressionError::EmptyDataset);
        }
        let mut fused = videos
            .iter()
            .map(|v| {
                Ok(FusedVideo {
                    clips: fused_clips(&v.gf, &v.clips, dims, clip_target)?,
                    mos: v.mos,
                })
            })
            .collect::<Result<Vec<_>, RegressionError>>()?;

        let standardizer =
            FeatureStandardizer::fit(fused.iter().flat_map(|v| v.clips.iter().map(Vec::as_slice)))?;
        for v in &mut fused {
            for c in &mut v.clips {
                standardizer.apply(c)?;
            }
        }

        let head = RegressionHead::new_seeded(dims.fused_len(), training.hidden_dim, training.seed);
        let outcome = train(head, &fused, training)?;
        let model = QualityModel {
            format_version: MODEL_FORMAT_VERSION,
            tool_version: crate::TOOL_VERSION.to_string(),
            dims,
            clip_target,
            training: *training,
            standardizer,
            head: outcome.head,
        };
        Ok((model, outcome.loss_curve))
    }

    /// Mean clip score over the sampled clips of one video.
    pub fn predict(
        &self,
        gf: &GeometryFeatureVector,
        clips: &[ClipFeatureRecord],
    ) -> Result<f64, RegressionError> {
        let rows = fused_clips(gf, clips, self.dims, self.clip_target)?;
        let mut total = 0.0;
        for mut row in rows.iter().cloned() {
            self.standardizer.apply(&mut row)?;
            total += self.head.forward(&row)?;
        }
        Ok(total / rows.len() as f64)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), serde_json::Error> {
        serde_json::to_writer_pretty(w, self)
    }

    /// Reads a model, rejecting any format version other than
    /// [`MODEL_FORMAT_VERSION`] before decoding the rest.
    pub fn read_json<R: Read>(r: R) -> Result<QualityModel, ModelReadError> {
        let value: serde_json::Value = serde_json::from_reader(r)?;
        let found = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or(ModelReadError::MissingVersion)?;
        if found != MODEL_FORMAT_VERSION as u64 {
            return Err(RegressionError::UnsupportedVersion {
                found: found as u32,
                expected: MODEL_FORMAT_VERSION,
            }
            .into());
        }
        let model: QualityModel = serde_json::from_value(value)?;
        let head = &model.head;
        if head.input_dim() != model.dims.fused_len()
            || model.standardizer.dim() != head.input_dim()
        {
            return Err(RegressionError::DimensionMismatch {
                what: "stored head input",
                expected: model.dims.fused_len(),
                got: head.input_dim(),
            }
            .into());
        }
        RegressionHead::from_params(head.input_dim(), head.hidden_dim(), head.params().to_vec())?;
        Ok(model)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelReadError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model file has no format_version")]
    MissingVersion,
    #[error(transparent)]
    Invalid(#[from] RegressionError),
}
