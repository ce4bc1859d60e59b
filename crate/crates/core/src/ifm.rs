//! Jaffe–McGlamery image formation model: synthetic underwater scenes and an
//! analytic depth oracle.
//!
//! Per channel, an observed pixel is U = I·t + B·(1 − t) with transmission
//! t = e^{−β·d}. Synthesis applies the model forward; inversion recovers d
//! from a known clear image and water parameters, which makes the model a
//! ground-truth oracle for the projection pipeline.
//!
//! Depth is normalized to `[0, 1]`, so the attenuation coefficients here are
//! per normalized-depth unit (divide by `depth_scale` to get 1/m). Preset β
//! and background values are artifact constants chosen to respect the
//! red-attenuates-most ordering; they are not measured water data.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::imagecore::{DepthMap, RgbImage};

/// Pixels where |clear − background| falls below this are uninvertible and
/// get marked invalid instead of producing huge depths.
pub const CONTRAST_THRESHOLD: f64 = 1e-3;

/// Color channel selector for the inversion oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    R,
    G,
    B,
}

impl Channel {
    pub fn index(self) -> usize {
        match self {
            Channel::R => 0,
            Channel::G => 1,
            Channel::B => 2,
        }
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "r" | "R" => Ok(Channel::R),
            "g" | "G" => Ok(Channel::G),
            "b" | "B" => Ok(Channel::B),
            other => Err(format!("unknown channel '{other}' (expected R, G or B)")),
        }
    }
}

/// Per-channel attenuation β and global background light B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaterParams {
    /// Attenuation per normalized-depth unit, (β_R, β_G, β_B), all ≥ 0.
    pub beta: [f64; 3],
    /// Global background light per channel, in `[0, 1]`.
    pub background: [f64; 3],
}

impl WaterParams {
    /// Builds parameters, warning on stderr when the physically expected
    /// ordering β_R ≥ β_G, β_R ≥ β_B does not hold. Out-of-range values are
    /// rejected.
    pub fn new(beta: [f64; 3], background: [f64; 3]) -> Self {
        assert!(beta.iter().all(|b| *b >= 0.0), "beta must be nonnegative");
        assert!(
            background.iter().all(|b| (0.0..=1.0).contains(b)),
            "background light must lie in [0,1]"
        );
        let params = Self { beta, background };
        if !params.ordering_plausible() {
            eprintln!(
                "warning: attenuation ordering is physically implausible \
                 (expected beta_R >= beta_G and beta_R >= beta_B, got {:?})",
                beta
            );
        }
        params
    }

    /// Red attenuates at least as fast as green and blue.
    pub fn ordering_plausible(&self) -> bool {
        self.beta[0] >= self.beta[1] && self.beta[0] >= self.beta[2]
    }
}

/// Named water-type presets for oracle scenes.
pub fn water_preset(name: &str) -> Result<WaterParams> {
    match name {
        "oceanI" => Ok(WaterParams::new([1.0, 0.35, 0.25], [0.05, 0.35, 0.45])),
        "oceanII" => Ok(WaterParams::new([1.3, 0.55, 0.5], [0.08, 0.3, 0.38])),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Depth-field shape for generated scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthProfile {
    /// Depth 0 at the top row, 1 at the bottom row.
    LinearRamp,
    /// Depth grows with distance from the image center.
    Radial,
    /// Smooth seeded value-noise field.
    RandomSmooth,
}

impl FromStr for DepthProfile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear-ramp" => Ok(DepthProfile::LinearRamp),
            "radial" => Ok(DepthProfile::Radial),
            "random-smooth" => Ok(DepthProfile::RandomSmooth),
            other => Err(format!("unknown depth profile '{other}'")),
        }
    }
}

/// A clear latent image, its depth field, and the water column parameters.
#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub clear: RgbImage,
    pub depth: DepthMap,
    pub params: WaterParams,
}

/// Applies the formation model forward: U = I·e^{−βd} + B·(1 − e^{−βd}).
pub fn ifm_synthesize(scene: &SyntheticScene) -> Result<RgbImage> {
    let (w, h) = (scene.clear.width(), scene.clear.height());
    check_dims(w, h, scene.depth.width(), scene.depth.height())?;
    let data = scene
        .clear
        .pixels()
        .iter()
        .zip(scene.depth.values())
        .map(|(clear, &d)| {
            let mut out = [0.0f64; 3];
            for c in 0..3 {
                let t = (-scene.params.beta[c] * d).exp();
                let u = clear[c] * t + scene.params.background[c] * (1.0 - t);
                out[c] = u.clamp(0.0, 1.0);
            }
            out
        })
        .collect();
    Ok(RgbImage::from_pixels(w, h, data))
}

/// Inverts the formation model on one channel: d = −ln((U − B)/(I − B))/β.
///
/// Pixels with channel contrast |I − B| ≤ [`CONTRAST_THRESHOLD`], or where
/// the observed ratio is non-positive, are marked invalid.
pub fn ifm_invert_depth(
    observed: &RgbImage,
    params: &WaterParams,
    clear: &RgbImage,
    channel: Channel,
) -> Result<DepthMap> {
    let c = channel.index();
    if params.beta[c] == 0.0 {
        return Err(Error::ZeroAttenuation);
    }
    let (w, h) = (observed.width(), observed.height());
    check_dims(w, h, clear.width(), clear.height())?;
    let beta = params.beta[c];
    let back = params.background[c];
    let mut data = Vec::with_capacity(w * h);
    let mut valid = Vec::with_capacity(w * h);
    for (obs, cl) in observed.pixels().iter().zip(clear.pixels()) {
        let denom = cl[c] - back;
        let ratio = (obs[c] - back) / denom;
        if denom.abs() <= CONTRAST_THRESHOLD || ratio <= 0.0 {
            data.push(0.0);
            valid.push(false);
        } else {
            data.push(-ratio.ln() / beta);
            valid.push(true);
        }
    }
    Ok(DepthMap::from_parts(w, h, data, valid, 1.0))
}

// Counter-based pixel hash (splitmix64 finalizer): same seed gives the same
// scene regardless of evaluation order or thread count.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn hash01(seed: u64, salt: u64, x: u64, y: u64) -> f64 {
    let h = mix(seed ^ mix(salt ^ mix(x ^ (y << 32))));
    (h >> 11) as f64 / (1u64 << 53) as f64
}

// Smooth value noise in [0,1]: bilinear interpolation over a lattice of
// hashed values with the given cell size.
fn value_noise(seed: u64, salt: u64, x: usize, y: usize, cell: usize) -> f64 {
    let fx = x as f64 / cell as f64;
    let fy = y as f64 / cell as f64;
    let (x0, y0) = (fx.floor() as u64, fy.floor() as u64);
    let (tx, ty) = (fx.fract(), fy.fract());
    // smoothstep removes lattice creases
    let sx = tx * tx * (3.0 - 2.0 * tx);
    let sy = ty * ty * (3.0 - 2.0 * ty);
    let v00 = hash01(seed, salt, x0, y0);
    let v10 = hash01(seed, salt, x0 + 1, y0);
    let v01 = hash01(seed, salt, x0, y0 + 1);
    let v11 = hash01(seed, salt, x0 + 1, y0 + 1);
    let a = v00 + (v10 - v00) * sx;
    let b = v01 + (v11 - v01) * sx;
    a + (b - a) * sy
}

/// Builds a deterministic synthetic scene: a textured clear image (so the
/// inversion stays well-posed) plus a depth field of the requested profile.
pub fn ifm_make_scene(
    width: usize,
    height: usize,
    preset: &str,
    profile: DepthProfile,
    seed: u64,
) -> Result<SyntheticScene> {
    assert!(width > 0 && height > 0, "dimensions must be positive");
    let params = water_preset(preset)?;

    // Channel ranges keep the clear image well away from the background
    // light so the per-pixel contrast precondition holds everywhere.
    let ranges: [(f64, f64); 3] = [(0.5, 0.95), (0.55, 0.9), (0.6, 0.95)];
    let mut clear = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let mut px = [0.0f64; 3];
            for (c, &(lo, hi)) in ranges.iter().enumerate() {
                let n = value_noise(seed, c as u64 + 1, x, y, 7);
                px[c] = lo + (hi - lo) * n;
            }
            clear.push(px);
        }
    }

    let mut depth = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let d = match profile {
                DepthProfile::LinearRamp => {
                    if height > 1 {
                        y as f64 / (height - 1) as f64
                    } else {
                        0.0
                    }
                }
                DepthProfile::Radial => {
                    let cx = (width as f64 - 1.0) / 2.0;
                    let cy = (height as f64 - 1.0) / 2.0;
                    let r = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                    let rmax = (cx * cx + cy * cy).sqrt().max(1.0);
                    (r / rmax).min(1.0)
                }
                DepthProfile::RandomSmooth => value_noise(seed, 11, x, y, 13),
            };
            depth.push(d);
        }
    }

    Ok(SyntheticScene {
        clear: RgbImage::from_pixels(width, height, clear),
        depth: DepthMap::from_values(width, height, depth, 1.0),
        params,
    })
}
