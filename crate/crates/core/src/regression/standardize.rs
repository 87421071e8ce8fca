use serde::{Deserialize, Serialize};

use super::RegressionError;

/// Per-dimension z-scoring fitted on training rows. Dimensions with zero
/// spread are centred but not scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStandardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl FeatureStandardizer {
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a [f64]>) -> Result<Self, RegressionError> {
        let rows: Vec<&[f64]> = rows.into_iter().collect();
        let dim = rows.first().ok_or(RegressionError::EmptyDataset)?.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(RegressionError::DimensionMismatch {
                what: "standardizer row",
                expected: dim,
                got: bad.len(),
            });
        }
        let n = rows.len() as f64;
        let mut mean = vec![0.0; dim];
        for row in &rows {
            for (m, v) in mean.iter_mut().zip(*row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; dim];
        for row in &rows {
            for ((s, v), m) in var.iter_mut().zip(*row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let scale = var
            .iter()
            .zip(&mean)
            .map(|(s, m)| {
                let sd = (s / n).sqrt();
                if sd > 1e-12 * m.abs().max(1.0) {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(FeatureStandardizer { mean, scale })
    }

    pub fn identity(dim: usize) -> Self {
        FeatureStandardizer {
            mean: vec![0.0; dim],
            scale: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, row: &mut [f64]) -> Result<(), RegressionError> {
        if row.len() != self.mean.len() {
            return Err(RegressionError::DimensionMismatch {
                what: "standardizer input",
                expected: self.mean.len(),
                got: row.len(),
            });
        }
        for ((v, m), s) in row.iter_mut().zip(&self.mean).zip(&self.scale) {
            *v = (*v - m) / s;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centres_and_scales() {
        let rows = [vec![1.0, 5.0, 2.0], vec![3.0, 5.0, 4.0]];
        let s = FeatureStandardizer::fit(rows.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(s.mean, vec![2.0, 5.0, 3.0]);
        assert_eq!(s.scale, vec![1.0, 1.0, 1.0]);
        let mut r = vec![3.0, 7.0, 2.0];
        s.apply(&mut r).unwrap();
        assert_eq!(r, vec![1.0, 2.0, -1.0]);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let rows = [vec![0.0, 9.0], vec![4.0, 9.0]];
        let s = FeatureStandardizer::fit(rows.iter().map(Vec::as_slice)).unwrap();
        let mut r = vec![4.0, 9.0];
        s.apply(&mut r).unwrap();
        assert_eq!(r, vec![1.0, 0.0]);
    }

    #[test]
    fn errors() {
        assert!(FeatureStandardizer::fit(std::iter::empty()).is_err());
        let rows = [vec![0.0, 9.0], vec![4.0]];
        assert!(FeatureStandardizer::fit(rows.iter().map(Vec::as_slice)).is_err());
    }
}
