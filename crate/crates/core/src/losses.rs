//! Pixel-wise training losses and the combined objective, as pure masked
//! reductions. No gradients are computed here; an external trainer consumes
//! these as scoring functions.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::imagecore::DepthMap;
use crate::projection::projection_error;

/// Reading of the L2 term: E[||d − d̂||₂] over scalars reduces to a mean
/// absolute difference; the mean-squared alternate is kept for ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum L2Kind {
    MeanAbsolute,
    MeanSquared,
}

/// Loss weights and numeric guards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    /// λ inside the SILog radicand.
    pub silog_lambda: f64,
    /// α scaling outside the SILog square root.
    pub silog_alpha: f64,
    /// Weight of the L2 term in the combined objective.
    pub w_l2: f64,
    /// Weight of the SILog term.
    pub w_silog: f64,
    /// Weight of the projection term.
    pub w_proj: f64,
    /// Values are floored here before any logarithm.
    pub log_floor: f64,
    pub l2_kind: L2Kind,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            silog_lambda: 0.85,
            silog_alpha: 10.0,
            w_l2: 0.3,
            w_silog: 0.6,
            w_proj: 0.1,
            log_floor: 1e-6,
            l2_kind: L2Kind::MeanAbsolute,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.w_l2 >= 0.0
            && self.w_silog >= 0.0
            && self.w_proj >= 0.0
            && self.silog_alpha > 0.0
            && (0.0..=1.0).contains(&self.silog_lambda)
            && self.log_floor > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Format {
                path: "<loss config>".into(),
                reason: "invalid loss configuration".into(),
            })
        }
    }
}

fn joint_valid<'a>(
    pred: &'a DepthMap,
    gt: &'a DepthMap,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    check_dims(pred.width(), pred.height(), gt.width(), gt.height())?;
    Ok(pred
        .iter()
        .zip(gt.iter())
        .filter(|((_, pv), (_, gv))| *pv && *gv)
        .map(|((p, _), (g, _))| (p, g)))
}

/// Mean absolute difference over the joint-valid mask.
pub fn l2_loss(pred: &DepthMap, gt: &DepthMap) -> Result<f64> {
    l2_loss_kind(pred, gt, L2Kind::MeanAbsolute)
}

pub fn l2_loss_kind(pred: &DepthMap, gt: &DepthMap, kind: L2Kind) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (p, g) in joint_valid(pred, gt)? {
        sum += match kind {
            L2Kind::MeanAbsolute => (g - p).abs(),
            L2Kind::MeanSquared => (g - p) * (g - p),
        };
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(sum / n as f64)
}

/// Scale-invariant log loss: with g_i = ln(d̂_i) − ln(d_i) over T valid
/// pixels, α·sqrt((1/T)Σg² − (λ/T²)(Σg)²). Inputs are floored at
/// `log_floor` before the logs.
pub fn silog_loss(pred: &DepthMap, gt: &DepthMap, config: &LossConfig) -> Result<f64> {
    config.validate()?;
    let mut sum_g = 0.0;
    let mut sum_g2 = 0.0;
    let mut n = 0usize;
    for (p, g) in joint_valid(pred, gt)? {
        let gi = p.max(config.log_floor).ln() - g.max(config.log_floor).ln();
        sum_g += gi;
        sum_g2 += gi * gi;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    let t = n as f64;
    let inner = sum_g2 / t - config.silog_lambda * (sum_g * sum_g) / (t * t);
    // Cauchy-Schwarz keeps this nonnegative for lambda <= 1; rounding can
    // land a hair below zero
    if inner < -1e-12 {
        eprintln!("warning: silog radicand {inner} below rounding tolerance; clamping to 0");
    }
    Ok(config.silog_alpha * inner.max(0.0).sqrt())
}

/// Per-term values of the combined objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveBreakdown {
    pub total: f64,
    /// Unweighted L2 term and the reading it used.
    pub l2: f64,
    pub l2_kind: L2Kind,
    /// Unweighted SILog term.
    pub silog: f64,
    /// Unweighted projection term (coarse vs. prediction deviation).
    pub projection: f64,
    /// The projection term's joint mask was empty; its value is 0.
    pub projection_empty: bool,
}

/// Weighted objective w_l2·L2 + w_silog·SILog + w_proj·L⊥, where L⊥ is the
/// projection error between the coarse attenuation-prior map and the
/// prediction.
pub fn combined_objective(
    pred: &DepthMap,
    gt: &DepthMap,
    coarse: &DepthMap,
    config: &LossConfig,
) -> Result<ObjectiveBreakdown> {
    config.validate()?;
    let l2 = l2_loss_kind(pred, gt, config.l2_kind)?;
    let silog = silog_loss(pred, gt, config)?;
    let proj = projection_error(coarse, pred)?;
    let total = config.w_l2 * l2 + config.w_silog * silog + config.w_proj * proj.value;
    Ok(ObjectiveBreakdown {
        total,
        l2,
        l2_kind: config.l2_kind,
        silog,
        projection: proj.value,
        projection_empty: proj.is_empty(),
    })
}
