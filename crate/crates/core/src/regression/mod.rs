//! Clip-level feature fusion, the two-layer regression head and its training.

mod adam;
mod error;
mod fusion;
mod head;
mod model;
mod standardize;
mod train;

pub use adam::{adam_step, AdamConfig, AdamMoments};
pub use error::RegressionError;
pub use fusion::{fuse, predict_quality, ClipFeatureRecord, FeatureDims};
pub use head::RegressionHead;
pub use model::{ModelReadError, QualityModel, VideoSample, MODEL_FORMAT_VERSION};
pub use standardize::FeatureStandardizer;
pub use train::{train, FusedVideo, TrainOutcome, TrainingConfig};
