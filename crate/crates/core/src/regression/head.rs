use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RegressionError;

/// Two fully-connected layers with a rectifier in between:
/// `q = w2 . max(0, W1 x + b1) + b2`.
///
/// Parameters live in one flat buffer laid out as `[W1 (row-major, hidden x
/// input) | b1 | w2 | b2]` so the optimizer can treat them uniformly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionHead {
    input_dim: usize,
    hidden_dim: usize,
    params: Vec<f64>,
}

impl RegressionHead {
    pub fn param_count(input_dim: usize, hidden_dim: usize) -> usize {
        hidden_dim * input_dim + 2 * hidden_dim + 1
    }

    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        RegressionHead {
            input_dim,
            hidden_dim,
            params: vec![0.0; Self::param_count(input_dim, hidden_dim)],
        }
    }

    /// Weights and biases drawn uniformly from `+-1/sqrt(fan_in)` of their
    /// layer, from a generator seeded with `seed`.
    pub fn new_seeded(input_dim: usize, hidden_dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut head = Self::zeros(input_dim, hidden_dim);
        let b1 = 1.0 / (input_dim.max(1) as f64).sqrt();
        let b2 = 1.0 / (hidden_dim.max(1) as f64).sqrt();
        let layer1 = hidden_dim * input_dim + hidden_dim;
        for (i, p) in head.params.iter_mut().enumerate() {
            let bound = if i < layer1 { b1 } else { b2 };
            *p = rng.random_range(-bound..=bound);
        }
        head
    }

    /// Builds a head from a flat parameter buffer.
    pub fn from_params(
        input_dim: usize,
        hidden_dim: usize,
        params: Vec<f64>,
    ) -> Result<Self, RegressionError> {
        let expected = Self::param_count(input_dim, hidden_dim);
        if params.len() != expected {
            return Err(RegressionError::DimensionMismatch {
                what: "head parameters",
                expected,
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(RegressionError::NonFinite("head parameters"));
        }
        Ok(RegressionHead {
            input_dim,
            hidden_dim,
            params,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn w1_len(&self) -> usize {
        self.hidden_dim * self.input_dim
    }

    pub fn w1_mut(&mut self) -> &mut [f64] {
        let n = self.w1_len();
        &mut self.params[..n]
    }

    pub fn b1_mut(&mut self) -> &mut [f64] {
        let n = self.w1_len();
        let h = self.hidden_dim;
        &mut self.params[n..n + h]
    }

    pub fn w2_mut(&mut self) -> &mut [f64] {
        let n = self.w1_len() + self.hidden_dim;
        let h = self.hidden_dim;
        &mut self.params[n..n + h]
    }

    pub fn b2_mut(&mut self) -> &mut f64 {
        self.params.last_mut().expect("head has a bias")
    }

    fn check_input(&self, x: &[f64]) -> Result<(), RegressionError> {
        if x.len() != self.input_dim {
            return Err(RegressionError::DimensionMismatch {
                what: "head input",
                expected: self.input_dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Writes the pre-activations `W1 x + b1` into `hidden`.
    fn hidden_pre(&self, x: &[f64], hidden: &mut [f64]) {
        let (w1, rest) = self.params.split_at(self.w1_len());
        let b1 = &rest[..self.hidden_dim];
        for (j, h) in hidden.iter_mut().enumerate() {
            let row = &w1[j * self.input_dim..(j + 1) * self.input_dim];
            *h = b1[j] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
        }
    }

    fn output(&self, hidden: &[f64]) -> f64 {
        let off = self.w1_len() + self.hidden_dim;
        let w2 = &self.params[off..off + self.hidden_dim];
        let b2 = self.params[off + self.hidden_dim];
        b2 + w2
            .iter()
            .zip(hidden)
            .map(|(w, &h)| w * h.max(0.0))
            .sum::<f64>()
    }

    /// Clip score for one fused feature vector.
    pub fn forward(&self, x: &[f64]) -> Result<f64, RegressionError> {
        self.check_input(x)?;
        let mut hidden = vec![0.0; self.hidden_dim];
        self.hidden_pre(x, &mut hidden);
        Ok(self.output(&hidden))
    }

    /// Mean squared error over `(input, target)` pairs and its gradient with
    /// respect to every parameter, accumulated into `grad` (which is
    /// overwritten).
    pub fn mse_gradient<'a>(
        &self,
        batch: impl ExactSizeIterator<Item = (&'a [f64], f64)>,
        grad: &mut [f64],
    ) -> Result<f64, RegressionError> {
        let n = batch.len();
        if n == 0 {
            return Err(RegressionError::EmptyDataset);
        }
        if grad.len() != self.params.len() {
            return Err(RegressionError::DimensionMismatch {
                what: "gradient buffer",
                expected: self.params.len(),
                got: grad.len(),
            });
        }
        grad.fill(0.0);
        let (input, hidden_dim) = (self.input_dim, self.hidden_dim);
        let w1_len = self.w1_len();
        let w2_off = w1_len + hidden_dim;
        let mut hidden = vec![0.0; hidden_dim];
        let mut loss = 0.0;
        let scale = 2.0 / n as f64;

        for (x, target) in batch {
            self.check_input(x)?;
            self.hidden_pre(x, &mut hidden);
            let residual = self.output(&hidden) - target;
            loss += residual * residual;
            let dq = scale * residual;

            grad[w2_off + hidden_dim] += dq;
            for j in 0..hidden_dim {
                let h = hidden[j];
                if h <= 0.0 {
                    continue;
                }
                grad[w2_off + j] += dq * h;
                let dh = dq * self.params[w2_off + j];
                grad[w1_len + j] += dh;
                let row = &mut grad[j * input..(j + 1) * input];
                for (g, v) in row.iter_mut().zip(x) {
                    *g += dh * v;
                }
            }
        }
        Ok(loss / n as f64)
    }
}
