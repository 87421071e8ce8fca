//! Geometry attributes of a mesh and the statistics that summarize them.

mod curvature;
mod dihedral;
mod error;
mod features;
pub mod fit;

pub use curvature::{
    angle_defects, gaussian_curvature, vertex_curvatures, voronoi_area, AreaMode, VertexCurvature,
};
pub use dihedral::dihedral_angles;
pub use error::{FitError, GeometryError};
pub use features::{
    extract_geometry_features, normalized_histogram, Family, FeatureConfig, FitWarning,
    GeometryFeatureVector, GeometryFeatures, HistogramBin, GF_LEN, GF_SLOT_NAMES,
};
pub use fit::{
    fit_aggd, fit_basic, fit_gamma, fit_ggd, shift_to_positive, zscore, AggdParams, BasicParams,
    DistributionParams, GammaParams, GgdParams,
};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Dihedral,
    Curvature,
}

/// Per-element attribute values (one per qualifying edge or vertex).
///
/// Elements that could not produce a finite value are dropped and counted in
/// `excluded`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub kind: FieldKind,
    pub values: Vec<f64>,
    pub excluded: usize,
}

impl ScalarField {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
