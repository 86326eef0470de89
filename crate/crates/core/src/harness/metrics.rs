//! Per-SNR-point aggregation of Monte-Carlo estimates.
//!
//! With `e` the estimated and `s` the true linear SNR:
//! - NMSE = `mean((e - s)^2) / s^2`, reported in dB;
//! - normalized error = `(e - s) / s`, summarized by its mean and sample variance;
//! - `mean_est_db` = `10 log10(mean(e))`.
//!
//! Degenerate trials (no finite estimate) are excluded from every statistic
//! and counted separately.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Proposed,
    Ml,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Ml => "ml",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scenario: String,
    pub m: usize,
    pub k: usize,
    pub lambdas: Vec<f64>,
    pub snr_true_db: f64,
    pub method: Method,
    pub trials: usize,
    pub trials_degenerate: usize,
    pub mean_est_db: Option<f64>,
    pub bias_db: Option<f64>,
    pub nmse_db: Option<f64>,
    pub norm_err_mean: Option<f64>,
    /// Undefined with fewer than two valid trials.
    pub norm_err_var: Option<f64>,
}

/// Statistics of one method at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStats {
    pub valid: usize,
    pub degenerate: usize,
    pub mean_est_db: Option<f64>,
    pub nmse_db: Option<f64>,
    pub norm_err_mean: Option<f64>,
    pub norm_err_var: Option<f64>,
}

/// Aggregates linear SNR estimates (`None` = degenerate) against `true_snr`.
pub fn point_stats(true_snr: f64, estimates: &[Option<f64>]) -> PointStats {
    let valid: Vec<f64> = estimates
        .iter()
        .filter_map(|e| e.filter(|v| v.is_finite()))
        .collect();
    let degenerate = estimates.len() - valid.len();
    let n = valid.len();
    if n == 0 {
        return PointStats {
            valid: 0,
            degenerate,
            mean_est_db: None,
            nmse_db: None,
            norm_err_mean: None,
            norm_err_var: None,
        };
    }
    let nf = n as f64;
    let mean_est = valid.iter().sum::<f64>() / nf;
    let errs: Vec<f64> = valid.iter().map(|e| (e - true_snr) / true_snr).collect();
    let err_mean = errs.iter().sum::<f64>() / nf;
    let nmse = errs.iter().map(|e| e * e).sum::<f64>() / nf;
    let var = (n > 1).then(|| {
        errs.iter()
            .map(|e| (e - err_mean) * (e - err_mean))
            .sum::<f64>()
            / (nf - 1.0)
    });
    PointStats {
        valid: n,
        degenerate,
        mean_est_db: Some(10.0 * mean_est.log10()),
        nmse_db: Some(10.0 * nmse.log10()),
        norm_err_mean: Some(err_mean),
        norm_err_var: var,
    }
}

/// Averages over the SNR points of one method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub points: usize,
    pub avg_norm_err_var: Option<f64>,
    pub avg_norm_err_mean: Option<f64>,
    pub max_abs_bias_db: Option<f64>,
    pub trials_degenerate: usize,
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = values.collect();
    let v = v?;
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn summarize(rows: &[MetricsRow], method: Method) -> MethodSummary {
    let mine: Vec<&MetricsRow> = rows.iter().filter(|r| r.method == method).collect();
    let max_abs_bias_db = mine
        .iter()
        .map(|r| r.bias_db.map(f64::abs))
        .collect::<Option<Vec<f64>>>()
        .and_then(|v| v.into_iter().reduce(f64::max));
    MethodSummary {
        method,
        points: mine.len(),
        avg_norm_err_var: mean_of(mine.iter().map(|r| r.norm_err_var)),
        avg_norm_err_mean: mean_of(mine.iter().map(|r| r.norm_err_mean)),
        max_abs_bias_db,
        trials_degenerate: mine.iter().map(|r| r.trials_degenerate).sum(),
    }
}

pub const CSV_HEADER: &str = "scenario,m,k,lambdas,snr_true_db,method,trials,trials_degenerate,mean_est_db,bias_db,nmse_db,norm_err_mean,norm_err_var";

/// 12 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else if v.is_nan() {
        "NA".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt_num)
}

pub fn fmt_lambdas(l: &[f64]) -> String {
    l.iter()
        .map(|v| format!("{v:e}"))
        .collect::<Vec<_>>()
        .join(";")
}

impl MetricsRow {
    pub fn to_csv(&self) -> String {
        [
            self.scenario.clone(),
            self.m.to_string(),
            self.k.to_string(),
            fmt_lambdas(&self.lambdas),
            fmt_num(self.snr_true_db),
            self.method.as_str().to_string(),
            self.trials.to_string(),
            self.trials_degenerate.to_string(),
            fmt_opt(self.mean_est_db),
            fmt_opt(self.bias_db),
            fmt_opt(self.nmse_db),
            fmt_opt(self.norm_err_mean),
            fmt_opt(self.norm_err_var),
        ]
        .join(",")
    }
}
