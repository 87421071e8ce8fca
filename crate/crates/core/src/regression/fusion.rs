use serde::{Deserialize, Serialize};

use crate::geometry::{GeometryFeatureVector, GF_LEN};

use super::{RegressionError, RegressionHead};

/// Declared widths of the spatial and temporal feature vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDims {
    pub d_s: usize,
    pub d_t: usize,
}

impl FeatureDims {
    /// Widths produced by the reference backbones: four pooled ResNet-50
    /// stages (256 + 512 + 1024 + 2048) and the two SlowFast R50 pathways
    /// (2048 + 256).
    pub const DEFAULT: FeatureDims = FeatureDims {
        d_s: 3840,
        d_t: 2304,
    };

    /// Length of a fused clip vector.
    pub fn fused_len(&self) -> usize {
        GF_LEN + self.d_s + self.d_t
    }
}

impl Default for FeatureDims {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Spatial and temporal features of one clip of one video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipFeatureRecord {
    pub video_id: String,
    pub clip_index: usize,
    pub sf: Vec<f64>,
    pub tf: Vec<f64>,
}

impl ClipFeatureRecord {
    pub fn validate(&self, dims: FeatureDims) -> Result<(), RegressionError> {
        if self.sf.len() != dims.d_s {
            return Err(RegressionError::DimensionMismatch {
                what: "spatial features",
                expected: dims.d_s,
                got: self.sf.len(),
            });
        }
        if self.tf.len() != dims.d_t {
            return Err(RegressionError::DimensionMismatch {
                what: "temporal features",
                expected: dims.d_t,
                got: self.tf.len(),
            });
        }
        if self.sf.iter().chain(&self.tf).any(|v| !v.is_finite()) {
            return Err(RegressionError::NonFinite("clip features"));
        }
        Ok(())
    }
}

/// `gf ++ sf ++ tf`.
pub fn fuse(
    gf: &GeometryFeatureVector,
    clip: &ClipFeatureRecord,
    dims: FeatureDims,
) -> Result<Vec<f64>, RegressionError> {
    clip.validate(dims)?;
    let mut out = Vec::with_capacity(dims.fused_len());
    out.extend_from_slice(gf.values());
    out.extend_from_slice(&clip.sf);
    out.extend_from_slice(&clip.tf);
    Ok(out)
}

/// Average of the head's clip scores over `clips`.
///
/// The clip dimensions are taken from the first clip; every clip must match
/// them and the head's input width.
pub fn predict_quality(
    head: &RegressionHead,
    gf: &GeometryFeatureVector,
    clips: &[ClipFeatureRecord],
) -> Result<f64, RegressionError> {
    let first = clips.first().ok_or(RegressionError::NoClips)?;
    let dims = FeatureDims {
        d_s: first.sf.len(),
        d_t: first.tf.len(),
    };
    let mut total = 0.0;
    for clip in clips {
        total += head.forward(&fuse(gf, clip, dims)?)?;
    }
    Ok(total / clips.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip(sf: Vec<f64>, tf: Vec<f64>) -> ClipFeatureRecord {
        ClipFeatureRecord {
            video_id: "v".into(),
            clip_index: 0,
            sf,
            tf,
        }
    }

    #[test]
    fn default_fused_length() {
        assert_eq!(FeatureDims::DEFAULT.fused_len(), 6166);
        assert_eq!(256 + 512 + 1024 + 2048, FeatureDims::DEFAULT.d_s);
        let dims = FeatureDims::DEFAULT;
        let f = fuse(
            &GeometryFeatureVector::zeros(),
            &clip(vec![0.0; 3840], vec![0.0; 2304]),
            dims,
        )
        .unwrap();
        assert_eq!(f.len(), 6166);
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fuse_order() {
        let gf = GeometryFeatureVector::new(std::array::from_fn(|i| i as f64));
        let f = fuse(
            &gf,
            &clip(vec![100.0, 101.0], vec![200.0]),
            FeatureDims { d_s: 2, d_t: 1 },
        )
        .unwrap();
        assert_eq!(&f[..22], gf.values());
        assert_eq!(&f[22..], &[100.0, 101.0, 200.0]);
    }

    #[test]
    fn fuse_dimension_mismatch() {
        let err = fuse(
            &GeometryFeatureVector::zeros(),
            &clip(vec![0.0; 3], vec![0.0; 1]),
            FeatureDims { d_s: 2, d_t: 1 },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            RegressionError::DimensionMismatch {
                expected: 2,
                got: 3,
                ..
            }
        ));
    }

    #[test]
    fn pooling() {
        // head returns f[22] (first spatial entry) for positive inputs
        let mut head = RegressionHead::zeros(23, 1);
        head.w1_mut()[22] = 1.0;
        head.w2_mut()[0] = 1.0;
        let gf = GeometryFeatureVector::zeros();
        let clips: Vec<_> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&q| clip(vec![q], vec![]))
            .collect();
        assert_eq!(predict_quality(&head, &gf, &clips).unwrap(), 2.0);
        assert_eq!(predict_quality(&head, &gf, &clips[1..2]).unwrap(), 2.0);
        assert_eq!(
            predict_quality(&head, &gf, &[]),
            Err(RegressionError::NoClips)
        );
        let reversed: Vec<_> = clips.iter().rev().cloned().collect();
        assert_eq!(predict_quality(&head, &gf, &reversed).unwrap(), 2.0);
    }
}
