use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RegressionError {
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no clips to pool")]
    NoClips,
    #[error("training set is empty")]
    EmptyDataset,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error(
        "loss became {loss} at epoch {epoch}, batch {batch} (learning rate {learning_rate}); \
         try a smaller learning rate"
    )]
    NonFiniteLoss {
        epoch: usize,
        batch: usize,
        loss: f64,
        learning_rate: f64,
    },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("unsupported model format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
}
