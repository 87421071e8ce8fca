use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Metrics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub video_id: String,
    pub predicted: f64,
    pub mos: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold_id: usize,
    pub test_groups: Vec<String>,
    pub n: usize,
    pub metrics: Metrics,
    pub predictions: Vec<PredictionRow>,
}

/// Per-fold criteria and their mean across folds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub folds: Vec<FoldReport>,
    pub mean: Metrics,
    /// Total number of test videos over all folds.
    pub n: usize,
    /// How scores were compared (raw or logistic-mapped PLCC / RMSE, and the
    /// MOS scale used).
    pub score_scale: String,
}

impl EvaluationReport {
    pub fn from_folds(folds: Vec<FoldReport>, score_scale: impl Into<String>) -> Self {
        let metrics: Vec<Metrics> = folds.iter().map(|f| f.metrics).collect();
        EvaluationReport {
            mean: Metrics::mean(&metrics),
            n: folds.iter().map(|f| f.n).sum(),
            folds,
            score_scale: score_scale.into(),
        }
    }

    pub fn median_srcc(&self) -> f64 {
        let mut v: Vec<f64> = self.folds.iter().map(|f| f.metrics.srcc).collect();
        v.sort_by(f64::total_cmp);
        match v.len() {
            0 => f64::NAN,
            n if n % 2 == 1 => v[n / 2],
            n => 0.5 * (v[n / 2 - 1] + v[n / 2]),
        }
    }

    /// `fold,n,srcc,plcc,krcc,rmse` with one row per fold and a final
    /// `mean` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fold,n,srcc,plcc,krcc,rmse\n");
        for f in &self.folds {
            let m = f.metrics;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                f.fold_id, f.n, m.srcc, m.plcc, m.krcc, m.rmse
            );
        }
        let m = self.mean;
        let _ = writeln!(
            out,
            "mean,{},{},{},{},{}",
            self.n, m.srcc, m.plcc, m.krcc, m.rmse
        );
        out
    }

    /// Fixed-width table in the same column order as the CSV.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<6}{:>6}{:>10}{:>10}{:>10}{:>10}\n",
            "fold", "n", "SRCC", "PLCC", "KRCC", "RMSE"
        );
        let row = |out: &mut String, label: &str, n: usize, m: &Metrics| {
            let _ = writeln!(
                out,
                "{:<6}{:>6}{:>10.4}{:>10.4}{:>10.4}{:>10.4}",
                label, n, m.srcc, m.plcc, m.krcc, m.rmse
            );
        };
        for f in &self.folds {
            row(&mut out, &f.fold_id.to_string(), f.n, &f.metrics);
        }
        row(&mut out, "mean", self.n, &self.mean);
        out
    }
}
