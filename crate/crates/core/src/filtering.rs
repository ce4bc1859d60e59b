//! Edge-preserving smoothing of depth maps: an O(1)-per-pixel box filter on
//! integral images and a guided filter built on top of it.
//!
//! Windows shrink to the image bounds (no reflection padding), so the mean
//! of a constant image is that constant even at borders. The guided filter
//! expresses the output as a local linear function of the guide: per window
//! centered on a pixel, a = cov(guide, input)/(var(guide) + ε) and
//! b = mean(input) − a·mean(guide); the output pixel is a·guide + b. With a
//! constant guide this reduces exactly to the box filter.

use crate::error::{Error, Result};
use crate::imagecore::DepthMap;

/// Guided-filter window half-width and regularizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedFilterConfig {
    pub radius: usize,
    pub epsilon: f64,
}

impl Default for GuidedFilterConfig {
    fn default() -> Self {
        // conventional settings for 480p imagery on [0,1] data
        Self {
            radius: 8,
            epsilon: 1e-4,
        }
    }
}

impl GuidedFilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::Format {
                path: "<config>".into(),
                reason: "guided filter radius must be >= 1".into(),
            });
        }
        if self.epsilon <= 0.0 {
            return Err(Error::Format {
                path: "<config>".into(),
                reason: "guided filter epsilon must be > 0".into(),
            });
        }
        Ok(())
    }
}

/// Sliding-window mean of a single-channel plane over (2r+1)×(2r+1)
/// windows clipped to the image; integral-image implementation, cost
/// independent of the radius.
pub fn box_filter_plane(data: &[f64], width: usize, height: usize, radius: usize) -> Vec<f64> {
    assert_eq!(data.len(), width * height);
    assert!(radius >= 1);
    // integral[(y+1)(w+1) + x+1] = sum of data over [0..=x, 0..=y]
    let iw = width + 1;
    let mut integral = vec![0.0f64; iw * (height + 1)];
    for y in 0..height {
        let mut row = 0.0;
        for x in 0..width {
            row += data[y * width + x];
            integral[(y + 1) * iw + x + 1] = integral[y * iw + x + 1] + row;
        }
    }
    let mut out = vec![0.0f64; width * height];
    for y in 0..height {
        let y0 = y.saturating_sub(radius);
        let y1 = (y + radius + 1).min(height);
        for x in 0..width {
            let x0 = x.saturating_sub(radius);
            let x1 = (x + radius + 1).min(width);
            let sum = integral[y1 * iw + x1] - integral[y0 * iw + x1] - integral[y1 * iw + x0]
                + integral[y0 * iw + x0];
            out[y * width + x] = sum / ((y1 - y0) * (x1 - x0)) as f64;
        }
    }
    out
}

/// Box filter over a depth map's values; the validity mask passes through.
pub fn box_filter(map: &DepthMap, radius: usize) -> DepthMap {
    let data = box_filter_plane(map.values(), map.width(), map.height(), radius);
    DepthMap::from_parts(
        map.width(),
        map.height(),
        data,
        map.valid().to_vec(),
        map.depth_scale(),
    )
}

/// Guided-filter smoothing of `input` steered by a single-channel guide.
///
/// Output values are clamped to `[0, 1]`; the validity mask passes through
/// unchanged.
pub fn guided_filter(
    input: &DepthMap,
    guide: &[f64],
    config: &GuidedFilterConfig,
) -> Result<DepthMap> {
    config.validate()?;
    let (w, h) = (input.width(), input.height());
    if guide.len() != w * h {
        // report the guide as a 1-row raster of its actual length
        return Err(Error::DimensionMismatch(w, h, guide.len(), 1));
    }
    let r = config.radius;
    let p = input.values();
    let gp: Vec<f64> = guide.iter().zip(p).map(|(g, p)| g * p).collect();
    let gg: Vec<f64> = guide.iter().map(|g| g * g).collect();
    let mean_g = box_filter_plane(guide, w, h, r);
    let mean_p = box_filter_plane(p, w, h, r);
    let mean_gp = box_filter_plane(&gp, w, h, r);
    let mean_gg = box_filter_plane(&gg, w, h, r);

    let mut out = vec![0.0f64; w * h];
    for i in 0..w * h {
        let var = mean_gg[i] - mean_g[i] * mean_g[i];
        let cov = mean_gp[i] - mean_g[i] * mean_p[i];
        let a = cov / (var + config.epsilon);
        let b = mean_p[i] - a * mean_g[i];
        out[i] = (a * guide[i] + b).clamp(0.0, 1.0);
    }
    Ok(DepthMap::from_parts(
        w,
        h,
        out,
        input.valid().to_vec(),
        input.depth_scale(),
    ))
}
