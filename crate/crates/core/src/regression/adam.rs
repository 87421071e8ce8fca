use serde::{Deserialize, Serialize};

use super::RegressionError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 4e-6,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates, one entry per parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamMoments {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

impl AdamMoments {
    pub fn zeros(len: usize) -> Self {
        AdamMoments {
            first: vec![0.0; len],
            second: vec![0.0; len],
        }
    }
}

/// One bias-corrected Adam update, returning new parameters and moments.
/// `step` counts updates from 1.
pub fn adam_step(
    params: &[f64],
    grads: &[f64],
    moments: &AdamMoments,
    config: &AdamConfig,
    step: u64,
) -> Result<(Vec<f64>, AdamMoments), RegressionError> {
    let mut params = params.to_vec();
    let mut moments = moments.clone();
    adam_update(&mut params, grads, &mut moments, config, step)?;
    Ok((params, moments))
}

pub(crate) fn adam_update(
    params: &mut [f64],
    grads: &[f64],
    moments: &mut AdamMoments,
    config: &AdamConfig,
    step: u64,
) -> Result<(), RegressionError> {
    let n = params.len();
    for (what, len) in [
        ("gradients", grads.len()),
        ("first moments", moments.first.len()),
        ("second moments", moments.second.len()),
    ] {
        if len != n {
            return Err(RegressionError::DimensionMismatch {
                what,
                expected: n,
                got: len,
            });
        }
    }
    if step == 0 {
        return Err(RegressionError::InvalidConfig(
            "Adam step index starts at 1".into(),
        ));
    }
    let AdamConfig {
        learning_rate,
        beta1,
        beta2,
        epsilon,
    } = *config;
    let t = step.min(i32::MAX as u64) as i32;
    let c1 = 1.0 - beta1.powi(t);
    let c2 = 1.0 - beta2.powi(t);
    for i in 0..n {
        let g = grads[i];
        let m = beta1 * moments.first[i] + (1.0 - beta1) * g;
        let v = beta2 * moments.second[i] + (1.0 - beta2) * g * g;
        moments.first[i] = m;
        moments.second[i] = v;
        params[i] -= learning_rate * (m / c1) / ((v / c2).sqrt() + epsilon);
    }
    Ok(())
}
