//! Agreement between predicted scores and subjective scores.
//!
//! Ties use average ranks for Spearman and the tau-b correction for Kendall.
//! Zero-variance inputs are reported as [`MetricError::Degenerate`] instead
//! of producing NaN.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("length mismatch: {0} predictions vs {1} scores")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("input contains a non-finite value")]
    NonFinite,
    #[error("{0} has zero variance; the coefficient is undefined")]
    Degenerate(&'static str),
    #[error("logistic fit failed: {0}")]
    LogisticFit(&'static str),
}

fn check(pred: &[f64], mos: &[f64], needed: usize) -> Result<(), MetricError> {
    if pred.len() != mos.len() {
        return Err(MetricError::LengthMismatch(pred.len(), mos.len()));
    }
    if pred.len() < needed {
        return Err(MetricError::TooFewSamples {
            needed,
            got: pred.len(),
        });
    }
    if pred.iter().chain(mos).any(|v| !v.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    Ok(())
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricError> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(MetricError::Degenerate("prediction"));
    }
    if syy == 0.0 {
        return Err(MetricError::Degenerate("subjective score"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks, tied values sharing the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

/// Pearson linear correlation coefficient.
pub fn plcc(pred: &[f64], mos: &[f64]) -> Result<f64, MetricError> {
    check(pred, mos, 3)?;
    pearson(pred, mos)
}

/// Spearman rank correlation: Pearson correlation of the average ranks.
pub fn srcc(pred: &[f64], mos: &[f64]) -> Result<f64, MetricError> {
    check(pred, mos, 3)?;
    pearson(&average_ranks(pred), &average_ranks(mos))
}

/// Kendall tau-b, counted in `O(n log n)` with Knight's merge-sort method.
pub fn krcc(pred: &[f64], mos: &[f64]) -> Result<f64, MetricError> {
    check(pred, mos, 3)?;
    let n = pred.len();
    let mut pairs: Vec<(f64, f64)> = pred.iter().copied().zip(mos.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let total = (n * (n - 1) / 2) as u64;
    let tied_runs = |eq: &dyn Fn(usize, usize) -> bool| -> u64 {
        let mut ties = 0u64;
        let mut run = 1u64;
        for i in 1..n {
            if eq(i - 1, i) {
                run += 1;
            } else {
                ties += run * (run - 1) / 2;
                run = 1;
            }
        }
        ties + run * (run - 1) / 2
    };
    let tied_x = tied_runs(&|a, b| pairs[a].0 == pairs[b].0);
    let tied_xy = tied_runs(&|a, b| pairs[a].0 == pairs[b].0 && pairs[a].1 == pairs[b].1);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let swaps = merge_count(&mut ys);
    let tied_y = {
        let mut ties = 0u64;
        let mut run = 1u64;
        for i in 1..n {
            if ys[i] == ys[i - 1] {
                run += 1;
            } else {
                ties += run * (run - 1) / 2;
                run = 1;
            }
        }
        ties + run * (run - 1) / 2
    };

    if tied_x == total {
        return Err(MetricError::Degenerate("prediction"));
    }
    if tied_y == total {
        return Err(MetricError::Degenerate("subjective score"));
    }
    let numerator =
        total as f64 - tied_x as f64 - tied_y as f64 + tied_xy as f64 - 2.0 * swaps as f64;
    let denominator = ((total - tied_x) as f64).sqrt() * ((total - tied_y) as f64).sqrt();
    Ok((numerator / denominator).clamp(-1.0, 1.0))
}

/// Stable merge sort of `v`, returning the number of inversions (pairs with
/// `v[i] > v[j]`, `i < j`).
fn merge_count(v: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid]) + merge_count(&mut v[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            merged.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            merged.push(v[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    swaps
}

/// Root mean squared error.
pub fn rmse(pred: &[f64], mos: &[f64]) -> Result<f64, MetricError> {
    check(pred, mos, 2)?;
    let sse: f64 = pred.iter().zip(mos).map(|(p, m)| (p - m) * (p - m)).sum();
    Ok((sse / pred.len() as f64).sqrt())
}

/// Four-parameter logistic `f(x) = (b1 - b2) / (1 + exp(-(x - b3) / |b4|)) + b2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Logistic4 {
    pub b: [f64; 4],
}

impl Logistic4 {
    pub fn eval(&self, x: f64) -> f64 {
        let [b1, b2, b3, b4] = self.b;
        (b1 - b2) / (1.0 + (-(x - b3) / b4.abs()).exp()) + b2
    }

    fn jacobian_row(&self, x: f64) -> [f64; 4] {
        let [b1, b2, b3, b4] = self.b;
        let s = 1.0 / (1.0 + (-(x - b3) / b4.abs()).exp());
        let ds = s * (1.0 - s);
        [
            s,
            1.0 - s,
            -(b1 - b2) * ds / b4.abs(),
            -(b1 - b2) * ds * (x - b3) / (b4 * b4) * b4.signum(),
        ]
    }

    fn sse(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| (b - self.eval(a)).powi(2))
            .sum()
    }

    /// Least-squares fit mapping `x` onto `y` (Levenberg-Marquardt).
    pub fn fit(x: &[f64], y: &[f64]) -> Result<Logistic4, MetricError> {
        check(x, y, 4)?;
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let sx = (x.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / n).sqrt();
        if sx == 0.0 {
            return Err(MetricError::Degenerate("prediction"));
        }
        let (ymin, ymax) = y
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let mut model = Logistic4 {
            b: [ymax, ymin, mx, sx],
        };
        let mut sse = model.sse(x, y);
        let mut lambda = 1e-3;
        for _ in 0..500 {
            let mut jtj = [[0.0; 4]; 4];
            let mut jtr = [0.0; 4];
            for (&xi, &yi) in x.iter().zip(y) {
                let row = model.jacobian_row(xi);
                let r = yi - model.eval(xi);
                for a in 0..4 {
                    jtr[a] += row[a] * r;
                    for b in 0..4 {
                        jtj[a][b] += row[a] * row[b];
                    }
                }
            }
            let mut improved = false;
            while lambda < 1e16 {
                let mut lhs = jtj;
                for (a, row) in lhs.iter_mut().enumerate() {
                    row[a] += lambda * jtj[a][a].max(1e-12);
                }
                let Some(delta) = solve4(lhs, jtr) else {
                    lambda *= 10.0;
                    continue;
                };
                let candidate = Logistic4 {
                    b: std::array::from_fn(|k| model.b[k] + delta[k]),
                };
                let candidate_sse = candidate.sse(x, y);
                if candidate_sse.is_finite() && candidate_sse <= sse && candidate.b[3] != 0.0 {
                    let gain = sse - candidate_sse;
                    model = candidate;
                    sse = candidate_sse;
                    lambda = (lambda / 10.0).max(1e-12);
                    improved = gain > 1e-15 * sse.max(1e-300);
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        if model.b.iter().all(|v| v.is_finite()) {
            Ok(model)
        } else {
            Err(MetricError::LogisticFit("parameters diverged"))
        }
    }
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricOptions {
    /// Fit a four-parameter logistic from predictions to scores before
    /// computing PLCC and RMSE.
    pub logistic: bool,
}

/// The four criteria, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub srcc: f64,
    pub plcc: f64,
    pub krcc: f64,
    pub rmse: f64,
}

impl Metrics {
    pub fn compute(
        pred: &[f64],
        mos: &[f64],
        options: MetricOptions,
    ) -> Result<Metrics, MetricError> {
        let srcc = srcc(pred, mos)?;
        let krcc = krcc(pred, mos)?;
        let (plcc, rmse) = if options.logistic {
            let f = Logistic4::fit(pred, mos)?;
            let mapped: Vec<f64> = pred.iter().map(|&p| f.eval(p)).collect();
            (plcc(&mapped, mos)?, rmse(&mapped, mos)?)
        } else {
            (plcc(pred, mos)?, rmse(pred, mos)?)
        };
        Ok(Metrics {
            srcc,
            plcc,
            krcc,
            rmse,
        })
    }

    /// Element-wise mean.
    pub fn mean(all: &[Metrics]) -> Metrics {
        let n = all.len() as f64;
        let avg = |f: fn(&Metrics) -> f64| all.iter().map(f).sum::<f64>() / n;
        Metrics {
            srcc: avg(|m| m.srcc),
            plcc: avg(|m| m.plcc),
            krcc: avg(|m| m.krcc),
            rmse: avg(|m| m.rmse),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRED: [f64; 5] = [1.0, 2.0, 3.0, 5.0, 4.0];
    const MOS: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

    #[test]
    fn one_swap() {
        assert!((srcc(&PRED, &MOS).unwrap() - 0.9).abs() < 1e-12);
        assert!((krcc(&PRED, &MOS).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn perfect_and_inverse() {
        let neg: Vec<f64> = MOS.iter().map(|v| -v).collect();
        assert!((srcc(&MOS, &MOS).unwrap() - 1.0).abs() < 1e-12);
        assert!((srcc(&neg, &MOS).unwrap() + 1.0).abs() < 1e-12);
        assert!((krcc(&neg, &MOS).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(rmse(&MOS, &MOS).unwrap(), 0.0);
    }

    #[test]
    fn affine() {
        let p: Vec<f64> = MOS.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((plcc(&p, &MOS).unwrap() - 1.0).abs() < 1e-15);
        assert!((krcc(&p, &MOS).unwrap() - 1.0).abs() < 1e-12);
        assert!(rmse(&p, &MOS).unwrap() > 0.0);
    }

    #[test]
    fn ties() {
        assert_eq!(
            average_ranks(&[3.0, 1.0, 3.0, 2.0]),
            vec![3.5, 1.0, 3.5, 2.0]
        );
        let x = [1.0, 1.0, 2.0, 3.0];
        let y = [1.0, 2.0, 3.0, 4.0];
        // C = 5, D = 0, n0 = 6, n1 = 1, n2 = 0
        let expected = 5.0 / (5.0f64 * 6.0).sqrt();
        assert!((krcc(&x, &y).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn degenerate_inputs_are_errors() {
        let flat = [2.0; 5];
        assert_eq!(
            srcc(&flat, &MOS),
            Err(MetricError::Degenerate("prediction"))
        );
        assert_eq!(
            plcc(&MOS, &flat),
            Err(MetricError::Degenerate("subjective score"))
        );
        assert_eq!(
            krcc(&flat, &MOS),
            Err(MetricError::Degenerate("prediction"))
        );
        assert_eq!(
            srcc(&[1.0, 2.0], &[1.0, 2.0]),
            Err(MetricError::TooFewSamples { needed: 3, got: 2 })
        );
        assert_eq!(
            plcc(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(MetricError::LengthMismatch(3, 2))
        );
        assert_eq!(
            rmse(&[1.0, f64::NAN], &[1.0, 2.0]),
            Err(MetricError::NonFinite)
        );
        assert!(rmse(&[1.0, 2.0], &[1.0, 2.0]).is_ok());
    }

    #[test]
    fn logistic_recovers_exact_curve() {
        let truth = Logistic4 {
            b: [5.0, 1.0, 0.3, 0.2],
        };
        let x: Vec<f64> = (0..40).map(|i| -1.0 + i as f64 * 0.05).collect();
        let y: Vec<f64> = x.iter().map(|&v| truth.eval(v)).collect();
        let fit = Logistic4::fit(&x, &y).unwrap();
        assert!(fit.sse(&x, &y) < 1e-12, "{fit:?}");
        let m = Metrics::compute(&x, &y, MetricOptions { logistic: true }).unwrap();
        assert!((m.plcc - 1.0).abs() < 1e-9);
        assert!(m.rmse < 1e-6);
        let raw = Metrics::compute(&x, &y, MetricOptions::default()).unwrap();
        assert!(raw.plcc < m.plcc);
        assert_eq!(raw.srcc, m.srcc);
    }

    #[test]
    fn merge_count_inversions() {
        let mut v = vec![3.0, 1.0, 2.0, 2.0, 0.0];
        // (3,1) (3,2) (3,2) (3,0) (1,0) (2,0) (2,0)
        assert_eq!(merge_count(&mut v), 7);
        assert_eq!(v, vec![0.0, 1.0, 2.0, 2.0, 3.0]);
    }
}
