//! Experimental protocol: clip sampling, motion-group cross-validation and
//! the correlation / error criteria.

mod cv;
mod error;
mod kfold;
pub mod metrics;
mod report;
mod sampling;

pub use cv::{
    run_cross_validation, run_cross_validation_with, CvConfig, HeadTrainer, Predictor, Trainer,
};
pub use error::EvaluationError;
pub use kfold::{kfold_split, FoldSpec};
pub use metrics::{krcc, plcc, rmse, srcc, MetricError, MetricOptions, Metrics};
pub use report::{EvaluationReport, FoldReport, PredictionRow};
pub use sampling::{cyclic_clip_sample, DEFAULT_CLIP_TARGET};
