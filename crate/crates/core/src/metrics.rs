//! Depth-estimation error metrics: Abs Rel, Sq Rel, RMSE and log10, all
//! lower-better and reduced over the joint-valid mask.

use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::imagecore::DepthMap;

/// Ground-truth values at or below this are excluded from the ratio and log
/// metrics (they stay in RMSE); predictions are floored here before log10.
pub const RATIO_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    /// mean(|d − d̂| / d)
    pub abs_rel: f64,
    /// mean((d − d̂)² / d)
    pub sq_rel: f64,
    /// sqrt(mean((d − d̂)²))
    pub rmse: f64,
    /// mean(|log₁₀ d − log₁₀ d̂|)
    pub log10: f64,
    /// Size of the joint-valid mask (the RMSE population).
    pub valid_pixels: usize,
}

/// Computes all four metrics of `pred` against ground truth `gt`.
pub fn evaluate(pred: &DepthMap, gt: &DepthMap) -> Result<MetricReport> {
    check_dims(pred.width(), pred.height(), gt.width(), gt.height())?;
    let mut se_sum = 0.0;
    let mut n = 0usize;
    let mut abs_rel_sum = 0.0;
    let mut sq_rel_sum = 0.0;
    let mut log10_sum = 0.0;
    let mut n_ratio = 0usize;
    for ((p, pv), (g, gv)) in pred.iter().zip(gt.iter()) {
        if !(pv && gv) {
            continue;
        }
        let diff = g - p;
        se_sum += diff * diff;
        n += 1;
        if g > RATIO_FLOOR {
            abs_rel_sum += diff.abs() / g;
            sq_rel_sum += diff * diff / g;
            log10_sum += (g.log10() - p.max(RATIO_FLOOR).log10()).abs();
            n_ratio += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    let ratio_mean = |sum: f64| if n_ratio == 0 { 0.0 } else { sum / n_ratio as f64 };
    Ok(MetricReport {
        abs_rel: ratio_mean(abs_rel_sum),
        sq_rel: ratio_mean(sq_rel_sum),
        rmse: (se_sum / n as f64).sqrt(),
        log10: ratio_mean(log10_sum),
        valid_pixels: n,
    })
}

impl MetricReport {
    /// Unweighted mean across per-image reports.
    pub fn mean_of(reports: &[MetricReport]) -> Option<MetricReport> {
        if reports.is_empty() {
            return None;
        }
        let n = reports.len() as f64;
        Some(MetricReport {
            abs_rel: reports.iter().map(|r| r.abs_rel).sum::<f64>() / n,
            sq_rel: reports.iter().map(|r| r.sq_rel).sum::<f64>() / n,
            rmse: reports.iter().map(|r| r.rmse).sum::<f64>() / n,
            log10: reports.iter().map(|r| r.log10).sum::<f64>() / n,
            valid_pixels: (reports.iter().map(|r| r.valid_pixels).sum::<usize>() as f64 / n)
                .round() as usize,
        })
    }
}
