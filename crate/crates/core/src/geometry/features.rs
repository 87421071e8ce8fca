use serde::{Deserialize, Serialize};

use crate::mesh::TriangleMesh;

use super::fit::{
    fit_aggd, fit_basic, fit_gamma, fit_ggd, histogram, is_constant, shift_to_positive, zscore,
    AggdParams, BasicParams, DistributionParams, GammaParams, GgdParams,
};
use super::{
    dihedral_angles, gaussian_curvature, AreaMode, FieldKind, FitError, GeometryError, ScalarField,
};

pub const GF_LEN: usize = 22;

/// Slot names of the geometry feature vector, in storage order.
pub const GF_SLOT_NAMES: [&str; GF_LEN] = [
    "dihedral_mean",
    "dihedral_variance",
    "dihedral_entropy",
    "dihedral_ggd_shape",
    "dihedral_ggd_scale",
    "dihedral_aggd_eta",
    "dihedral_aggd_shape",
    "dihedral_aggd_left_variance",
    "dihedral_aggd_right_variance",
    "dihedral_gamma_shape",
    "dihedral_gamma_rate",
    "curvature_mean",
    "curvature_variance",
    "curvature_entropy",
    "curvature_ggd_shape",
    "curvature_ggd_scale",
    "curvature_aggd_eta",
    "curvature_aggd_shape",
    "curvature_aggd_left_variance",
    "curvature_aggd_right_variance",
    "curvature_gamma_shape",
    "curvature_gamma_rate",
];

/// The 22 geometry parameters: 11 for the dihedral field followed by the same
/// 11 for the curvature field (see [`GF_SLOT_NAMES`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GeometryFeatureVector([f64; GF_LEN]);

impl GeometryFeatureVector {
    pub fn new(values: [f64; GF_LEN]) -> Self {
        GeometryFeatureVector(values)
    }

    pub fn zeros() -> Self {
        GeometryFeatureVector([0.0; GF_LEN])
    }

    pub fn values(&self) -> &[f64; GF_LEN] {
        &self.0
    }

    pub fn dihedral_slots(&self) -> &[f64] {
        &self.0[..11]
    }

    pub fn curvature_slots(&self) -> &[f64] {
        &self.0[11..]
    }

    /// Value of a named slot.
    pub fn get(&self, name: &str) -> Option<f64> {
        GF_SLOT_NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| self.0[i])
    }
}

impl TryFrom<Vec<f64>> for GeometryFeatureVector {
    type Error = String;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        let len = v.len();
        let arr: [f64; GF_LEN] = v
            .try_into()
            .map_err(|_| format!("geometry feature vector must have {GF_LEN} values, got {len}"))?;
        Ok(GeometryFeatureVector(arr))
    }
}

impl From<GeometryFeatureVector> for Vec<f64> {
    fn from(v: GeometryFeatureVector) -> Self {
        v.0.to_vec()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub area_mode: AreaMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Basic,
    Normalize,
    Ggd,
    Aggd,
    Gamma,
}

/// A fit that could not run normally. Its slots hold zeros, or the one-sided
/// fallback estimate for AGGD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitWarning {
    pub field: FieldKind,
    pub family: Family,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct GeometryFeatures {
    pub vector: GeometryFeatureVector,
    pub dihedral: ScalarField,
    pub curvature: ScalarField,
    pub dihedral_params: DistributionParams,
    pub curvature_params: DistributionParams,
    pub warnings: Vec<FitWarning>,
}

const ZERO_BASIC: BasicParams = BasicParams {
    mean: 0.0,
    variance: 0.0,
    entropy: 0.0,
};
const ZERO_GGD: GgdParams = GgdParams {
    shape: 0.0,
    scale: 0.0,
};
const ZERO_AGGD: AggdParams = AggdParams {
    eta: 0.0,
    shape: 0.0,
    left_variance: 0.0,
    right_variance: 0.0,
};
const ZERO_GAMMA: GammaParams = GammaParams {
    shape: 0.0,
    rate: 0.0,
};

fn fit_field(field: &ScalarField, warnings: &mut Vec<FitWarning>) -> DistributionParams {
    let mut warn = |family: Family, e: &FitError| {
        warnings.push(FitWarning {
            field: field.kind,
            family,
            message: e.to_string(),
        })
    };
    let values = &field.values;

    let basic = fit_basic(values).unwrap_or_else(|e| {
        warn(Family::Basic, &e);
        ZERO_BASIC
    });

    let (ggd, aggd) = match zscore(values) {
        Ok(z) => {
            let ggd = fit_ggd(&z).unwrap_or_else(|e| {
                warn(Family::Ggd, &e);
                ZERO_GGD
            });
            let aggd = match fit_aggd(&z) {
                Ok(p) => p,
                Err(e @ FitError::OneSidedInput { fallback }) => {
                    warn(Family::Aggd, &e);
                    fallback
                }
                Err(e) => {
                    warn(Family::Aggd, &e);
                    ZERO_AGGD
                }
            };
            (ggd, aggd)
        }
        Err(e) => {
            warn(Family::Normalize, &e);
            (ZERO_GGD, ZERO_AGGD)
        }
    };

    // judged on the raw field: the shift leaves only rounding noise above eps
    let gamma = if is_constant(values) {
        Err(FitError::DegenerateInput)
    } else {
        fit_gamma(&shift_to_positive(values))
    };
    let gamma = gamma.unwrap_or_else(|e| {
        warn(Family::Gamma, &e);
        ZERO_GAMMA
    });

    DistributionParams {
        basic,
        ggd,
        aggd,
        gamma,
    }
}

/// Computes the dihedral and curvature fields of `mesh` and summarizes each
/// with 11 distribution parameters.
///
/// Basic statistics use the raw field, GGD and AGGD the z-scored field, and
/// Gamma the raw field shifted onto positive support. A fit that fails on
/// degenerate data leaves zeros in its slots and records a [`FitWarning`].
pub fn extract_geometry_features(
    mesh: &TriangleMesh,
    config: &FeatureConfig,
) -> Result<GeometryFeatures, GeometryError> {
    let dihedral = dihedral_angles(mesh)?;
    let curvature = gaussian_curvature(mesh, config.area_mode)?;
    let mut warnings = Vec::new();
    let dihedral_params = fit_field(&dihedral, &mut warnings);
    let curvature_params = fit_field(&curvature, &mut warnings);

    let mut values = [0.0; GF_LEN];
    values[..11].copy_from_slice(&dihedral_params.to_slots());
    values[11..].copy_from_slice(&curvature_params.to_slots());
    Ok(GeometryFeatures {
        vector: GeometryFeatureVector(values),
        dihedral,
        curvature,
        dihedral_params,
        curvature_params,
        warnings,
    })
}

/// One histogram bin: `[lower, upper)` and the fraction of samples in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub probability: f64,
}

/// Normalized equal-width histogram over `[min, max]`, the same binning the
/// entropy estimate uses.
pub fn normalized_histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    if values.is_empty() || bins == 0 {
        return Vec::new();
    }
    let (counts, lo, hi) = histogram(values, bins);
    let width = (hi - lo) / bins as f64;
    let n = values.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| HistogramBin {
            lower: lo + width * i as f64,
            upper: lo + width * (i + 1) as f64,
            probability: c as f64 / n,
        })
        .collect()
}
