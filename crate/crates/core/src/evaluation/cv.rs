use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    kfold_split, EvaluationError, EvaluationReport, FoldReport, FoldSpec, MetricOptions, Metrics,
    PredictionRow,
};
use crate::regression::{FeatureDims, QualityModel, TrainingConfig, VideoSample};

/// Anything that scores a whole video.
pub trait Predictor {
    fn predict(&self, video: &VideoSample) -> Result<f64, EvaluationError>;
}

/// Builds a predictor from the training videos of one fold.
pub trait Trainer {
    type Model: Predictor;
    fn fit(&self, fold: &FoldSpec, train: &[VideoSample]) -> Result<Self::Model, EvaluationError>;
}

impl Predictor for QualityModel {
    fn predict(&self, video: &VideoSample) -> Result<f64, EvaluationError> {
        Ok(QualityModel::predict(self, &video.gf, &video.clips)?)
    }
}

/// Trains a fresh regression head per fold with the same settings and seed.
#[derive(Debug, Clone, Copy)]
pub struct HeadTrainer {
    pub dims: FeatureDims,
    pub training: TrainingConfig,
    pub clip_target: usize,
}

impl Trainer for HeadTrainer {
    type Model = QualityModel;

    fn fit(
        &self,
        _fold: &FoldSpec,
        train: &[VideoSample],
    ) -> Result<QualityModel, EvaluationError> {
        let (model, _) = QualityModel::fit(train, self.dims, &self.training, self.clip_target)?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CvConfig {
    /// Seeds the fold assignment.
    pub seed: u64,
    /// Accept any even number of motion groups instead of exactly ten.
    pub allow_any_even_groups: bool,
    pub metrics: MetricOptions,
}

pub fn run_cross_validation(
    dataset: &[VideoSample],
    dims: FeatureDims,
    training: &TrainingConfig,
    clip_target: usize,
    cv: &CvConfig,
) -> Result<EvaluationReport, EvaluationError> {
    let trainer = HeadTrainer {
        dims,
        training: *training,
        clip_target,
    };
    run_cross_validation_with(dataset, cv, &trainer)
}

/// Motion-group cross-validation: each fold trains on the videos outside its
/// test groups and scores the videos inside them.
pub fn run_cross_validation_with<T: Trainer>(
    dataset: &[VideoSample],
    cv: &CvConfig,
    trainer: &T,
) -> Result<EvaluationReport, EvaluationError> {
    let groups: Vec<&str> = dataset.iter().map(|v| v.group_id.as_str()).collect();
    let folds = kfold_split(&groups, cv.seed, cv.allow_any_even_groups)?;

    let mut reports = Vec::with_capacity(folds.len());
    for fold in &folds {
        let test: BTreeSet<&str> = fold.test_groups.iter().map(String::as_str).collect();
        let (test_videos, train_videos): (Vec<VideoSample>, Vec<VideoSample>) = dataset
            .iter()
            .cloned()
            .partition(|v| test.contains(v.group_id.as_str()));
        if train_videos.is_empty() {
            return Err(EvaluationError::EmptyTrainingSet(fold.fold_id));
        }
        if test_videos.is_empty() {
            return Err(EvaluationError::EmptyFold(fold.fold_id));
        }

        let model = trainer.fit(fold, &train_videos)?;
        let predictions = test_videos
            .iter()
            .map(|v| {
                Ok(PredictionRow {
                    video_id: v.video_id.clone(),
                    predicted: model.predict(v)?,
                    mos: v.mos,
                })
            })
            .collect::<Result<Vec<_>, EvaluationError>>()?;
        let pred: Vec<f64> = predictions.iter().map(|p| p.predicted).collect();
        let mos: Vec<f64> = predictions.iter().map(|p| p.mos).collect();
        reports.push(FoldReport {
            fold_id: fold.fold_id,
            test_groups: fold.test_groups.clone(),
            n: predictions.len(),
            metrics: Metrics::compute(&pred, &mos, cv.metrics)?,
            predictions,
        });
    }
    let scale = if cv.metrics.logistic {
        "PLCC and RMSE after a four-parameter logistic map onto the MOS scale"
    } else {
        "PLCC and RMSE on raw predictions against the MOS scale"
    };
    Ok(EvaluationReport::from_folds(reports, scale))
}
