use thiserror::Error;

use super::MetricError;
use crate::regression::RegressionError;

#[derive(Debug, Error, PartialEq)]
pub enum EvaluationError {
    #[error("a video needs at least one clip")]
    NoClips,
    #[error("clip target must be at least 1")]
    ZeroClipTarget,
    #[error("expected {expected} distinct motion groups, found {found}")]
    GroupCount { found: usize, expected: String },
    #[error("fold {0} has no test videos")]
    EmptyFold(usize),
    #[error("fold {0} has no training videos")]
    EmptyTrainingSet(usize),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("regression: {0}")]
    Regression(#[from] RegressionError),
}
