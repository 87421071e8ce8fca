//! Quality prediction for animated human models from mesh geometry statistics
//! fused with per-clip video features.
//!
//! The pipeline has four stages:
//!
//! - [`mesh`]: OBJ / ASCII PLY parsing into an indexed [`TriangleMesh`] with
//!   edge and vertex adjacency.
//! - [`geometry`]: per-edge dihedral angles, per-vertex Gaussian curvature and
//!   the 22 distribution parameters that summarize them.
//! - [`regression`]: per-clip feature fusion, a two-layer regression head
//!   trained with MSE and Adam, and average pooling into a model score.
//! - [`evaluation`]: cyclic clip sampling, motion-group k-fold
//!   cross-validation and the SRCC / PLCC / KRCC / RMSE criteria.
//!
//! ```
//! use ddhqa::geometry::{extract_geometry_features, FeatureConfig};
//! use ddhqa::mesh::primitives;
//!
//! let sphere = primitives::icosphere(2);
//! let gf = extract_geometry_features(&sphere, &FeatureConfig::default()).unwrap();
//! assert_eq!(gf.vector.values().len(), 22);
//! ```

pub mod evaluation;
pub mod geometry;
pub mod mesh;
pub mod records;
pub mod regression;

pub use evaluation::{EvaluationReport, FoldSpec};
pub use geometry::{GeometryFeatureVector, ScalarField};
pub use mesh::{FaceGeometry, TriangleMesh};
pub use regression::{ClipFeatureRecord, RegressionHead, TrainingConfig};

/// Version string embedded in every artifact the toolkit writes.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
