use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_update, AdamConfig, AdamMoments};
use super::{RegressionError, RegressionHead};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    /// Videos per minibatch; every sampled clip of those videos is in the
    /// batch.
    pub batch_size: usize,
    pub seed: u64,
    pub hidden_dim: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            learning_rate: 4e-6,
            epochs: 30,
            batch_size: 4,
            seed: 0,
            hidden_dim: 128,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl TrainingConfig {
    /// Checks value ranges. Zero epochs is accepted and trains nothing.
    pub fn validate(&self) -> Result<(), RegressionError> {
        let bad = |msg: &str| Err(RegressionError::InvalidConfig(msg.into()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if self.hidden_dim == 0 {
            return bad("hidden_dim must be at least 1");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("moment decays must lie in [0, 1)");
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return bad("epsilon must be positive");
        }
        Ok(())
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
        }
    }
}

/// Fused clip vectors of one video and the video's MOS, which every clip
/// uses as its regression target.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedVideo {
    pub clips: Vec<Vec<f64>>,
    pub mos: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub head: RegressionHead,
    /// Clip-weighted mean training loss of each epoch, measured before each
    /// batch's update.
    pub loss_curve: Vec<f64>,
}

/// Minibatch Adam on the clip-level squared error between each clip score and
/// its video's MOS.
///
/// Videos are shuffled every epoch by a generator seeded from
/// `config.seed`, so a fixed seed reproduces the parameter trajectory
/// exactly.
pub fn train(
    head: RegressionHead,
    videos: &[FusedVideo],
    config: &TrainingConfig,
) -> Result<TrainOutcome, RegressionError> {
    config.validate()?;
    if videos.is_empty() {
        return Err(RegressionError::EmptyDataset);
    }
    for v in videos {
        if v.clips.is_empty() {
            return Err(RegressionError::NoClips);
        }
        if !v.mos.is_finite() {
            return Err(RegressionError::NonFinite("MOS"));
        }
        if let Some(c) = v.clips.iter().find(|c| c.len() != head.input_dim()) {
            return Err(RegressionError::DimensionMismatch {
                what: "fused clip features",
                expected: head.input_dim(),
                got: c.len(),
            });
        }
    }

    let mut head = head;
    let mut loss_curve = Vec::with_capacity(config.epochs);
    if config.epochs == 0 {
        return Ok(TrainOutcome { head, loss_curve });
    }

    let adam = config.adam();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // keep the shuffle stream apart from the initialization stream
    rng.set_stream(1);
    let mut moments = AdamMoments::zeros(head.params().len());
    let mut grad = vec![0.0; head.params().len()];
    let mut order: Vec<usize> = (0..videos.len()).collect();
    let mut step = 0u64;

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let (mut weighted, mut count) = (0.0, 0usize);
        for (batch_index, chunk) in order.chunks(config.batch_size).enumerate() {
            let batch: Vec<(&[f64], f64)> = chunk
                .iter()
                .flat_map(|&i| {
                    videos[i]
                        .clips
                        .iter()
                        .map(move |c| (c.as_slice(), videos[i].mos))
                })
                .collect();
            let n = batch.len();
            let loss = head.mse_gradient(batch.into_iter(), &mut grad)?;
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(RegressionError::NonFiniteLoss {
                    epoch,
                    batch: batch_index,
                    loss,
                    learning_rate: config.learning_rate,
                });
            }
            step += 1;
            adam_update(head.params_mut(), &grad, &mut moments, &adam, step)?;
            weighted += loss * n as f64;
            count += n;
        }
        loss_curve.push(weighted / count as f64);
    }
    if head.params().iter().any(|p| !p.is_finite()) {
        return Err(RegressionError::NonFiniteLoss {
            epoch: config.epochs,
            batch: 0,
            loss: f64::NAN,
            learning_rate: config.learning_rate,
        });
    }
    Ok(TrainOutcome { head, loss_curve })
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;

    fn linear_teacher(n_videos: usize, dim: usize, seed: u64) -> Vec<FusedVideo> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n_videos)
            .map(|_| {
                let clips: Vec<Vec<f64>> = (0..3)
                    .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .collect();
                // every clip of a video shares feature 0
                let x0: f64 = rng.random_range(-1.0..1.0);
                let clips = clips
                    .into_iter()
                    .map(|mut c| {
                        c[0] = x0;
                        c
                    })
                    .collect();
                FusedVideo {
                    clips,
                    mos: 3.0 * x0 + 1.0,
                }
            })
            .collect()
    }

    #[test]
    fn linear_teacher_is_learned() {
        let data = linear_teacher(64, 6, 1);
        let config = TrainingConfig {
            learning_rate: 1e-2,
            epochs: 30,
            hidden_dim: 128,
            ..TrainingConfig::default()
        };
        let head = RegressionHead::new_seeded(6, 128, 9);
        let out = train(head, &data, &config).unwrap();
        assert_eq!(out.loss_curve.len(), 30);
        let first = out.loss_curve[0];
        let last = *out.loss_curve.last().unwrap();
        assert!(last < 0.01 * first, "first {first} last {last}");
    }

    #[test]
    fn zero_epochs_is_identity() {
        let data = linear_teacher(4, 3, 2);
        let head = RegressionHead::new_seeded(3, 4, 1);
        let config = TrainingConfig {
            epochs: 0,
            ..TrainingConfig::default()
        };
        let out = train(head.clone(), &data, &config).unwrap();
        assert_eq!(out.head, head);
        assert!(out.loss_curve.is_empty());
    }

    #[test]
    fn duplicated_clips_give_same_curve() {
        let data = linear_teacher(12, 4, 3);
        let doubled: Vec<FusedVideo> = data
            .iter()
            .map(|v| FusedVideo {
                clips: v
                    .clips
                    .iter()
                    .flat_map(|c| [c.clone(), c.clone()])
                    .collect(),
                mos: v.mos,
            })
            .collect();
        let config = TrainingConfig {
            learning_rate: 1e-3,
            epochs: 5,
            seed: 17,
            ..TrainingConfig::default()
        };
        let head = RegressionHead::new_seeded(4, 8, 5);
        let a = train(head.clone(), &data, &config).unwrap();
        let b = train(head, &doubled, &config).unwrap();
        for (x, y) in a.loss_curve.iter().zip(&b.loss_curve) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn seeded_training_is_bitwise_deterministic() {
        let data = linear_teacher(20, 5, 4);
        let config = TrainingConfig {
            learning_rate: 1e-3,
            epochs: 4,
            seed: 3,
            ..TrainingConfig::default()
        };
        let head = RegressionHead::new_seeded(5, 16, 5);
        let a = train(head.clone(), &data, &config).unwrap();
        let b = train(head, &data, &config).unwrap();
        assert_eq!(a.head, b.head);
        assert_eq!(
            a.loss_curve.iter().map(|l| l.to_bits()).collect::<Vec<_>>(),
            b.loss_curve.iter().map(|l| l.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn exploding_learning_rate_is_reported() {
        let mut data = linear_teacher(8, 3, 5);
        data.iter_mut().for_each(|v| v.mos *= 1e300);
        let config = TrainingConfig {
            learning_rate: 1e300,
            epochs: 50,
            ..TrainingConfig::default()
        };
        let err = train(RegressionHead::new_seeded(3, 4, 1), &data, &config).unwrap_err();
        assert!(
            matches!(err, RegressionError::NonFiniteLoss { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn input_validation() {
        let head = RegressionHead::new_seeded(3, 4, 1);
        let config = TrainingConfig::default();
        assert_eq!(
            train(head.clone(), &[], &config).unwrap_err(),
            RegressionError::EmptyDataset
        );
        let bad = vec![FusedVideo {
            clips: vec![vec![0.0; 2]],
            mos: 1.0,
        }];
        assert!(matches!(
            train(head.clone(), &bad, &config),
            Err(RegressionError::DimensionMismatch { .. })
        ));
        let nan = vec![FusedVideo {
            clips: vec![vec![0.0; 3]],
            mos: f64::NAN,
        }];
        assert!(train(head.clone(), &nan, &config).is_err());
        let lr0 = TrainingConfig {
            learning_rate: 0.0,
            ..config
        };
        assert!(matches!(
            train(head, &linear_teacher(2, 3, 1), &lr0),
            Err(RegressionError::InvalidConfig(_))
        ));
    }
}
