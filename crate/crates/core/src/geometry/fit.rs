//! Moment-matching estimators for the distribution families that summarize
//! a geometry attribute field.
//!
//! The GGD and AGGD shape parameters are found by nearest-match lookup in a
//! fixed table of the ratio `r(a) = G(2/a)^2 / (G(1/a) G(3/a))` for
//! `a` in `[0.2, 10]` with step `1e-3`, where `G` is the gamma function.
//! `r` is strictly increasing on that range, from about `0.0175` to `0.7442`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::FitError;

/// Number of equal-width histogram bins used for the entropy estimate.
pub const ENTROPY_BINS: usize = 256;

pub const SHAPE_GRID_MIN: f64 = 0.2;
pub const SHAPE_GRID_MAX: f64 = 10.0;
pub const SHAPE_GRID_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasicParams {
    pub mean: f64,
    /// Population variance (divides by N).
    pub variance: f64,
    /// Shannon entropy of the 256-bin histogram over `[min, max]`, in nats.
    pub entropy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GgdParams {
    pub shape: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggdParams {
    /// Mean-like asymmetry term `(beta_r - beta_l) G(2/v) / G(1/v)`.
    pub eta: f64,
    pub shape: f64,
    pub left_variance: f64,
    pub right_variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParams {
    pub shape: f64,
    pub rate: f64,
}

/// The 11 parameters estimated from one attribute field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionParams {
    pub basic: BasicParams,
    pub ggd: GgdParams,
    pub aggd: AggdParams,
    pub gamma: GammaParams,
}

impl DistributionParams {
    /// `[mean, variance, entropy, ggd shape, ggd scale, eta, aggd shape,
    /// left variance, right variance, gamma shape, gamma rate]`.
    pub fn to_slots(&self) -> [f64; 11] {
        [
            self.basic.mean,
            self.basic.variance,
            self.basic.entropy,
            self.ggd.shape,
            self.ggd.scale,
            self.aggd.eta,
            self.aggd.shape,
            self.aggd.left_variance,
            self.aggd.right_variance,
            self.gamma.shape,
            self.gamma.rate,
        ]
    }
}

fn check_samples(values: &[f64]) -> Result<(), FitError> {
    if values.len() < 2 {
        return Err(FitError::TooFewSamples(values.len()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(FitError::NonFinite);
    }
    Ok(())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn population_variance(values: &[f64], mean: f64) -> f64 {
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Range below which a field counts as constant, relative to its magnitude.
/// Absorbs rounding noise in values that are equal in exact arithmetic.
const CONSTANT_RELATIVE_RANGE: f64 = 1e-10;

pub(crate) fn is_constant(values: &[f64]) -> bool {
    let (lo, hi) = min_max(values);
    hi - lo <= CONSTANT_RELATIVE_RANGE * lo.abs().max(hi.abs())
}

/// Equal-width histogram of `values` over `[min, max]`; the maximum falls in
/// the last bin. A constant input (up to rounding) puts everything in bin 0.
pub fn histogram(values: &[f64], bins: usize) -> (Vec<u64>, f64, f64) {
    let (lo, hi) = min_max(values);
    let mut counts = vec![0u64; bins];
    let width = if is_constant(values) { 0.0 } else { hi - lo };
    for &v in values {
        let bin = if width > 0.0 {
            (((v - lo) / width) * bins as f64).floor() as usize
        } else {
            0
        };
        counts[bin.min(bins - 1)] += 1;
    }
    (counts, lo, hi)
}

/// Mean, population variance and 256-bin histogram entropy (nats).
pub fn fit_basic(values: &[f64]) -> Result<BasicParams, FitError> {
    check_samples(values)?;
    let mean = mean(values);
    let variance = population_variance(values, mean);
    let (counts, _, _) = histogram(values, ENTROPY_BINS);
    let n = values.len() as f64;
    let entropy = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum::<f64>();
    Ok(BasicParams {
        mean,
        variance,
        entropy: entropy.max(0.0),
    })
}

/// Subtracts the sample mean and divides by the population standard
/// deviation.
pub fn zscore(values: &[f64]) -> Result<Vec<f64>, FitError> {
    check_samples(values)?;
    let m = mean(values);
    let sd = population_variance(values, m).sqrt();
    if sd == 0.0 || is_constant(values) {
        return Err(FitError::DegenerateInput);
    }
    Ok(values.iter().map(|v| (v - m) / sd).collect())
}

struct ShapeTable {
    shapes: Vec<f64>,
    ratios: Vec<f64>,
}

fn generalized_gaussian_ratio(shape: f64) -> f64 {
    (2.0 * ln_gamma(2.0 / shape) - ln_gamma(1.0 / shape) - ln_gamma(3.0 / shape)).exp()
}

fn shape_table() -> &'static ShapeTable {
    static TABLE: OnceLock<ShapeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        // 200..=10000 thousandths
        let lo = (SHAPE_GRID_MIN / SHAPE_GRID_STEP).round() as u32;
        let hi = (SHAPE_GRID_MAX / SHAPE_GRID_STEP).round() as u32;
        let shapes: Vec<f64> = (lo..=hi).map(|k| k as f64 * SHAPE_GRID_STEP).collect();
        let ratios = shapes
            .iter()
            .map(|&a| generalized_gaussian_ratio(a))
            .collect();
        ShapeTable { shapes, ratios }
    })
}

/// Grid shape whose ratio `r(a)` is closest to `target`; the first grid point
/// wins ties.
fn solve_shape(target: f64) -> f64 {
    let table = shape_table();
    let mut best = 0;
    let mut best_err = f64::INFINITY;
    for (i, &r) in table.ratios.iter().enumerate() {
        let err = (r - target).abs();
        if err < best_err {
            best_err = err;
            best = i;
        }
    }
    table.shapes[best]
}

/// `sqrt(G(1/a) / G(3/a))`, the factor turning a standard deviation into a
/// generalized Gaussian scale.
fn scale_factor(shape: f64) -> f64 {
    (0.5 * (ln_gamma(1.0 / shape) - ln_gamma(3.0 / shape))).exp()
}

/// Zero-centred generalized Gaussian fit by moment matching.
///
/// Expects a normalized (zero-mean) field. `sigma^2` is taken as the mean of
/// `x^2` and `scale = sigma * sqrt(G(1/shape) / G(3/shape))`.
pub fn fit_ggd(values: &[f64]) -> Result<GgdParams, FitError> {
    check_samples(values)?;
    if is_constant(values) {
        return Err(FitError::DegenerateInput);
    }
    let n = values.len() as f64;
    let mean_abs = values.iter().map(|v| v.abs()).sum::<f64>() / n;
    let mean_sq = values.iter().map(|v| v * v).sum::<f64>() / n;
    let shape = solve_shape(mean_abs * mean_abs / mean_sq);
    Ok(GgdParams {
        shape,
        scale: mean_sq.sqrt() * scale_factor(shape),
    })
}

/// Asymmetric generalized Gaussian fit by moment matching.
///
/// Left and right spreads are the mean of `x^2` over `x < 0` and `x >= 0`.
/// When one side is empty, its spread is 0 and the estimate is returned
/// inside [`FitError::OneSidedInput`].
pub fn fit_aggd(values: &[f64]) -> Result<AggdParams, FitError> {
    check_samples(values)?;
    if is_constant(values) {
        return Err(FitError::DegenerateInput);
    }
    let (mut left_sq, mut left_n, mut right_sq, mut right_n) = (0.0, 0usize, 0.0, 0usize);
    let (mut abs_sum, mut sq_sum) = (0.0, 0.0);
    for &v in values {
        let sq = v * v;
        if v < 0.0 {
            left_sq += sq;
            left_n += 1;
        } else {
            right_sq += sq;
            right_n += 1;
        }
        abs_sum += v.abs();
        sq_sum += sq;
    }
    let n = values.len() as f64;
    let left_variance = if left_n > 0 {
        left_sq / left_n as f64
    } else {
        0.0
    };
    let right_variance = if right_n > 0 {
        right_sq / right_n as f64
    } else {
        0.0
    };
    let (sigma_l, sigma_r) = (left_variance.sqrt(), right_variance.sqrt());

    let mean_abs = abs_sum / n;
    let r_hat = mean_abs * mean_abs / (sq_sum / n);
    // (g^3 + 1)(g + 1) / (g^2 + 1)^2 tends to 1 as g -> 0 or g -> inf
    let correction = if sigma_l > 0.0 && sigma_r > 0.0 {
        let g = sigma_l / sigma_r;
        (g.powi(3) + 1.0) * (g + 1.0) / (g * g + 1.0).powi(2)
    } else {
        1.0
    };
    let shape = solve_shape(r_hat * correction);
    let factor = scale_factor(shape);
    let (beta_l, beta_r) = (sigma_l * factor, sigma_r * factor);
    let eta = (beta_r - beta_l) * (ln_gamma(2.0 / shape) - ln_gamma(1.0 / shape)).exp();

    let params = AggdParams {
        eta,
        shape,
        left_variance,
        right_variance,
    };
    if left_n == 0 || right_n == 0 {
        Err(FitError::OneSidedInput { fallback: params })
    } else {
        Ok(params)
    }
}

/// Shifts `values` onto positive support: `x - min + eps` with
/// `eps = 1e-6 * (max - min + 1)`.
pub fn shift_to_positive(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = min_max(values);
    let eps = 1e-6 * (hi - lo + 1.0);
    values.iter().map(|v| v - lo + eps).collect()
}

/// Shape-rate Gamma fit by the method of moments:
/// `shape = mean^2 / var`, `rate = mean / var`.
///
/// Inputs with any non-positive value are first moved onto positive support
/// with [`shift_to_positive`]; strictly positive inputs are used as given.
pub fn fit_gamma(values: &[f64]) -> Result<GammaParams, FitError> {
    check_samples(values)?;
    let shifted;
    let xs = if values.iter().any(|&v| v <= 0.0) {
        shifted = shift_to_positive(values);
        &shifted[..]
    } else {
        values
    };
    let m = mean(xs);
    let var = population_variance(xs, m);
    if var == 0.0 || is_constant(xs) {
        return Err(FitError::DegenerateInput);
    }
    Ok(GammaParams {
        shape: m * m / var,
        rate: m / var,
    })
}
