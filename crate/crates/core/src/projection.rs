//! Attenuation-prior linear depth model.
//!
//! Coarse depth is the affine map d̃ = μ0 + μ1·R + μ2·M over the RMI
//! channels. The coefficients come from a least-squares fit over an RGB-D
//! corpus, accumulated in streaming form as 3×3 normal-equation sufficient
//! statistics so shards can be fitted independently and merged.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::imagecore::DepthMap;
use crate::rmi::RmiImage;

/// Reference coefficients reported for the USOD10K training corpus.
pub const REFERENCE_MU: [f64; 3] = [0.496, -0.389, 0.464];

/// Ridge strength per accumulated pixel; the effective regularizer is
/// `RIDGE_PER_PIXEL * count` so behavior is corpus-size invariant.
pub const RIDGE_PER_PIXEL: f64 = 1e-8;

/// Fitted (μ0, μ1, μ2) plus fit metadata. Serializes to the coefficients
/// JSON consumed by `predict` and `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCoefficients {
    /// (intercept, R weight, M weight)
    pub mu: [f64; 3],
    pub pixel_count: u64,
    pub residual_rmse: f64,
    pub ridge: f64,
    pub depth_scale: f64,
    pub intensity_def: String,
}

impl ProjectionCoefficients {
    /// Coefficients with no fit provenance (e.g. the bundled reference μ).
    pub fn from_mu(mu: [f64; 3], depth_scale: f64) -> Self {
        Self {
            mu,
            pixel_count: 0,
            residual_rmse: 0.0,
            ridge: 0.0,
            depth_scale,
            intensity_def: "rec601".to_string(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("coefficients serialize");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Streaming sufficient statistics for the least-squares fit: XᵀX over
/// features (1, r, m), Xᵀy, Σy², and the valid-pixel count.
///
/// Accumulators are values: shards fill them independently and [`merge`]
/// combines them associatively.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitAccumulator {
    pub xtx: [[f64; 3]; 3],
    pub xty: [f64; 3],
    pub yty: f64,
    pub count: u64,
}

impl FitAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds one image pair into the statistics. Only pixels with valid
    /// ground truth contribute.
    pub fn accumulate(&mut self, rmi: &RmiImage, depth: &DepthMap) -> Result<()> {
        check_dims(rmi.width(), rmi.height(), depth.width(), depth.height())?;
        for (px, (d, ok)) in rmi.pixels().iter().zip(depth.iter()) {
            if !ok {
                continue;
            }
            let f = [1.0, px[0], px[1]];
            for i in 0..3 {
                for j in 0..3 {
                    self.xtx[i][j] += f[i] * f[j];
                }
                self.xty[i] += f[i] * d;
            }
            self.yty += d * d;
            self.count += 1;
        }
        Ok(())
    }

    /// Folds a single (r, m, d) sample; used by synthetic fits and tests.
    pub fn accumulate_sample(&mut self, r: f64, m: f64, d: f64) {
        let f = [1.0, r, m];
        for i in 0..3 {
            for j in 0..3 {
                self.xtx[i][j] += f[i] * f[j];
            }
            self.xty[i] += f[i] * d;
        }
        self.yty += d * d;
        self.count += 1;
    }

    /// Componentwise sum of two accumulators.
    pub fn merge(&self, other: &FitAccumulator) -> FitAccumulator {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.xtx[i][j] += other.xtx[i][j];
            }
            out.xty[i] += other.xty[i];
        }
        out.yty += other.yty;
        out.count += other.count;
        out
    }

    /// Squared residual Σ(d − μᵀf)² evaluated from the stored statistics;
    /// a quadratic in μ, so it needs no second pass over the data.
    pub fn squared_residual(&self, mu: &[f64; 3]) -> f64 {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..3 {
            lin += mu[i] * self.xty[i];
            for j in 0..3 {
                quad += mu[i] * self.xtx[i][j] * mu[j];
            }
        }
        self.yty - 2.0 * lin + quad
    }

    /// Solves the ridge-augmented normal equations
    /// (XᵀX + ridge·I)μ = Xᵀy with ridge = `RIDGE_PER_PIXEL`·count.
    pub fn solve(&self, depth_scale: f64) -> Result<ProjectionCoefficients> {
        if self.count == 0 {
            return Err(Error::EmptyAccumulator);
        }
        let ridge = RIDGE_PER_PIXEL * self.count as f64;
        let mut a = self.xtx;
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += ridge;
        }
        let mu = solve3(&a, &self.xty);
        let sse = self.squared_residual(&mu).max(0.0);
        Ok(ProjectionCoefficients {
            mu,
            pixel_count: self.count,
            residual_rmse: (sse / self.count as f64).sqrt(),
            ridge,
            depth_scale,
            intensity_def: "rec601".to_string(),
        })
    }
}

// Direct 3x3 solve by the adjugate; conditioning is handled by the ridge.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> [f64; 3] {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
    // inverse = adjugate / det (a is symmetric, so the adjugate is too)
    let inv = [
        [cof(1, 1, 2, 2), cof(0, 2, 2, 1), cof(0, 1, 1, 2)],
        [cof(1, 2, 2, 0), cof(0, 0, 2, 2), cof(0, 2, 1, 0)],
        [cof(1, 0, 2, 1), cof(0, 1, 2, 0), cof(0, 0, 1, 1)],
    ];
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += inv[i][j] * b[j];
        }
        out[i] /= det;
    }
    out
}

/// Coarse per-pixel depth d̃ = clamp(μ0 + μ1·r + μ2·m, 0, 1).
///
/// Every output pixel is valid; `depth_scale` is copied from the
/// coefficients.
pub fn predict_coarse(rmi: &RmiImage, coeffs: &ProjectionCoefficients) -> DepthMap {
    let [mu0, mu1, mu2] = coeffs.mu;
    let data = rmi
        .pixels()
        .iter()
        .map(|&[r, m, _]| (mu0 + mu1 * r + mu2 * m).clamp(0.0, 1.0))
        .collect();
    DepthMap::from_values(rmi.width(), rmi.height(), data, coeffs.depth_scale)
}

/// Projection error between a μ-projected coarse map and a candidate
/// prediction: the mean absolute deviation over the joint-valid mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionError {
    pub value: f64,
    /// Number of jointly valid pixels; 0 means the value is a placeholder.
    pub pixel_count: usize,
}

impl ProjectionError {
    pub fn is_empty(&self) -> bool {
        self.pixel_count == 0
    }
}

/// Masked mean |d̃ − d̂| over pixels valid in both maps. Returns 0 with the
/// empty flag set when the joint mask is empty.
pub fn projection_error(coarse: &DepthMap, predicted: &DepthMap) -> Result<ProjectionError> {
    check_dims(
        coarse.width(),
        coarse.height(),
        predicted.width(),
        predicted.height(),
    )?;
    let mut sum = 0.0;
    let mut n = 0usize;
    for ((a, av), (b, bv)) in coarse.iter().zip(predicted.iter()) {
        if av && bv {
            sum += (a - b).abs();
            n += 1;
        }
    }
    Ok(ProjectionError {
        value: if n == 0 { 0.0 } else { sum / n as f64 },
        pixel_count: n,
    })
}
