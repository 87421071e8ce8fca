use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh has no faces")]
    EmptyMesh,
    #[error("mesh has {0} vertices, at least 3 are required")]
    TooFewVertices(usize),
    #[error("face {face} references vertex {index} but the mesh has {vertex_count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("face {face} out of range ({face_count} faces)")]
    FaceOutOfRange { face: usize, face_count: usize },
    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(String),
}
