use thiserror::Error;

use super::fit::AggdParams;
use super::FieldKind;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("no element produced a {0:?} value")]
    EmptyField(FieldKind),
    #[error("vertex {0} has no non-degenerate incident face")]
    ZeroArea(usize),
    #[error("vertex {vertex} out of range ({vertex_count} vertices)")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("samples have zero variance")]
    DegenerateInput,
    #[error("samples contain a non-finite value")]
    NonFinite,
    /// All samples lie on one side of zero. `fallback` holds the estimate
    /// with the empty side's spread set to 0.
    #[error("all samples share one sign")]
    OneSidedInput { fallback: AggdParams },
}
