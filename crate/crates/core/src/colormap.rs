//! Fixed colormap for depth visualization PNGs. Cosmetic only — the 16-bit
//! depth PNG is the contractual output.

use crate::imagecore::{DepthMap, RgbImage};

// Perceptually-uniform ramp anchors (dark violet to bright yellow),
// sampled from the common "magma" palette.
const ANCHORS: [[f64; 3]; 6] = [
    [0.001, 0.000, 0.014],
    [0.317, 0.072, 0.485],
    [0.717, 0.215, 0.475],
    [0.975, 0.557, 0.324],
    [0.995, 0.827, 0.483],
    [0.987, 0.991, 0.750],
];

fn ramp(t: f64) -> [f64; 3] {
    let t = t.clamp(0.0, 1.0) * (ANCHORS.len() - 1) as f64;
    let i = (t.floor() as usize).min(ANCHORS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (ANCHORS[i], ANCHORS[i + 1]);
    [
        a[0] + (b[0] - a[0]) * f,
        a[1] + (b[1] - a[1]) * f,
        a[2] + (b[2] - a[2]) * f,
    ]
}

/// Maps a depth map to colors, near depth bright; invalid pixels go black.
pub fn colorize_depth(map: &DepthMap) -> RgbImage {
    let data = map
        .iter()
        .map(|(d, ok)| if ok { ramp(1.0 - d) } else { [0.0; 3] })
        .collect();
    RgbImage::from_pixels(map.width(), map.height(), data)
}
