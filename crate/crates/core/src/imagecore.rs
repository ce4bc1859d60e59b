//! Image containers, validity masks, and PNG / manifest IO.
//!
//! All pixel data is kept as `f64` in `[0, 1]`. Depth maps carry a per-pixel
//! validity mask; a raw 16-bit value of 0 on disk marks "no ground truth".

use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, Luma};

use crate::error::{check_dims, Error, Result};

/// H×W×3 image of channel intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl RgbImage {
    /// Builds an image from interleaved per-pixel triples (row-major).
    ///
    /// Panics if `data.len() != width * height` or a dimension is zero.
    pub fn from_pixels(width: usize, height: usize, data: Vec<[f64; 3]>) -> Self {
        assert!(width > 0 && height > 0, "dimensions must be positive");
        assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn constant(width: usize, height: usize, rgb: [f64; 3]) -> Self {
        Self::from_pixels(width, height, vec![rgb; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }
}

/// Single-channel normalized depth in `[0, 1]` with a validity mask.
///
/// `depth_scale` records how many meters normalized 1.0 corresponds to.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
    valid: Vec<bool>,
    depth_scale: f64,
}

impl DepthMap {
    pub fn from_parts(
        width: usize,
        height: usize,
        data: Vec<f64>,
        valid: Vec<bool>,
        depth_scale: f64,
    ) -> Self {
        assert!(width > 0 && height > 0, "dimensions must be positive");
        assert_eq!(data.len(), width * height);
        assert_eq!(valid.len(), width * height);
        assert!(depth_scale > 0.0, "depth_scale must be positive");
        Self {
            width,
            height,
            data,
            valid,
            depth_scale,
        }
    }

    /// All-valid map from raw values.
    pub fn from_values(width: usize, height: usize, data: Vec<f64>, depth_scale: f64) -> Self {
        let valid = vec![true; data.len()];
        Self::from_parts(width, height, data, valid, depth_scale)
    }

    pub fn constant(width: usize, height: usize, value: f64, depth_scale: f64) -> Self {
        Self::from_values(width, height, vec![value; width * height], depth_scale)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_mut(&mut self) -> &mut [bool] {
        &mut self.valid
    }

    pub fn depth_scale(&self) -> f64 {
        self.depth_scale
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[y * self.width + x]
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Iterator over `(value, valid)` pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.data.iter().copied().zip(self.valid.iter().copied())
    }
}

/// Ordered RGB/depth path pairs plus the corpus depth scale.
#[derive(Debug, Clone)]
pub struct DatasetManifest {
    pub entries: Vec<(PathBuf, PathBuf)>,
    pub depth_scale: f64,
}

/// Loads an 8- or 16-bit 3-channel PNG, scaling channels to `[0, 1]`.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path, other.to_string()),
    })?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    if width == 0 || height == 0 {
        return Err(Error::format(path, "empty image"));
    }
    let data: Vec<[f64; 3]> = match img {
        DynamicImage::ImageRgb8(buf) => buf
            .pixels()
            .map(|p| {
                [
                    p.0[0] as f64 / 255.0,
                    p.0[1] as f64 / 255.0,
                    p.0[2] as f64 / 255.0,
                ]
            })
            .collect(),
        DynamicImage::ImageRgb16(buf) => buf
            .pixels()
            .map(|p| {
                [
                    p.0[0] as f64 / 65535.0,
                    p.0[1] as f64 / 65535.0,
                    p.0[2] as f64 / 65535.0,
                ]
            })
            .collect(),
        other => {
            return Err(Error::format(
                path,
                format!(
                    "expected 8- or 16-bit 3-channel PNG, got {:?}",
                    other.color()
                ),
            ))
        }
    };
    Ok(RgbImage::from_pixels(width, height, data))
}

/// Loads a single-channel 16-bit PNG as a normalized depth map.
///
/// Raw value 0 marks a pixel without ground truth; everything else maps to
/// `raw / 65535`.
pub fn load_depth(path: &Path, depth_scale: f64) -> Result<DepthMap> {
    let img = image::open(path).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path, other.to_string()),
    })?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    let buf = match img {
        DynamicImage::ImageLuma16(buf) => buf,
        other => {
            return Err(Error::format(
                path,
                format!(
                    "expected single-channel 16-bit PNG, got {:?}",
                    other.color()
                ),
            ))
        }
    };
    let mut data = Vec::with_capacity(width * height);
    let mut valid = Vec::with_capacity(width * height);
    for p in buf.pixels() {
        let raw = p.0[0];
        data.push(raw as f64 / 65535.0);
        valid.push(raw != 0);
    }
    Ok(DepthMap::from_parts(width, height, data, valid, depth_scale))
}

/// Writes a depth map as a single-channel 16-bit PNG.
///
/// Invalid pixels are written as raw 0. A valid pixel that would quantize to
/// 0 is bumped to raw 1 so it is not mistaken for the invalid sentinel on
/// reload (error stays within one quantization step).
pub fn save_depth(map: &DepthMap, path: &Path) -> Result<()> {
    let mut buf: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::new(map.width() as u32, map.height() as u32);
    for (i, p) in buf.pixels_mut().enumerate() {
        let raw = if map.valid()[i] {
            let q = (map.values()[i].clamp(0.0, 1.0) * 65535.0).round() as u16;
            q.max(1)
        } else {
            0
        };
        *p = Luma([raw]);
    }
    buf.save(path)
        .map_err(|e| Error::format(path, e.to_string()))
}

/// Writes an RGB image as an 8-bit PNG (channels clamped to `[0, 1]`).
pub fn save_rgb8(img: &RgbImage, path: &Path) -> Result<()> {
    let mut buf = image::RgbImage::new(img.width() as u32, img.height() as u32);
    for (i, p) in buf.pixels_mut().enumerate() {
        let [r, g, b] = img.pixels()[i];
        p.0 = [
            (r.clamp(0.0, 1.0) * 255.0).round() as u8,
            (g.clamp(0.0, 1.0) * 255.0).round() as u8,
            (b.clamp(0.0, 1.0) * 255.0).round() as u8,
        ];
    }
    buf.save(path)
        .map_err(|e| Error::format(path, e.to_string()))
}

/// Writes an RGB image as a 16-bit PNG (lossless enough for oracle work).
pub fn save_rgb16(img: &RgbImage, path: &Path) -> Result<()> {
    let mut buf: ImageBuffer<image::Rgb<u16>, Vec<u16>> =
        ImageBuffer::new(img.width() as u32, img.height() as u32);
    for (i, p) in buf.pixels_mut().enumerate() {
        let [r, g, b] = img.pixels()[i];
        p.0 = [
            (r.clamp(0.0, 1.0) * 65535.0).round() as u16,
            (g.clamp(0.0, 1.0) * 65535.0).round() as u16,
            (b.clamp(0.0, 1.0) * 65535.0).round() as u16,
        ];
    }
    buf.save(path)
        .map_err(|e| Error::format(path, e.to_string()))
}

/// Parses a dataset manifest.
///
/// Format: UTF-8 CSV with header `rgb,depth`, one pair per line. An optional
/// leading comment `# depth_scale: <meters>` sets the corpus depth scale
/// (default 1.0). All paths are resolved relative to the manifest directory.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut depth_scale = 1.0f64;
    let mut entries = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("depth_scale:") {
                depth_scale = value.trim().parse().map_err(|_| Error::Manifest {
                    path: path.into(),
                    reason: format!("bad depth_scale on line {}", lineno + 1),
                })?;
                if depth_scale <= 0.0 {
                    return Err(Error::Manifest {
                        path: path.into(),
                        reason: "depth_scale must be positive".into(),
                    });
                }
            }
            continue;
        }
        if !saw_header {
            if line != "rgb,depth" {
                return Err(Error::Manifest {
                    path: path.into(),
                    reason: format!("expected header 'rgb,depth', got '{line}'"),
                });
            }
            saw_header = true;
            continue;
        }
        let (rgb, depth) = line.split_once(',').ok_or_else(|| Error::Manifest {
            path: path.into(),
            reason: format!("line {} is not 'rgb,depth' pair", lineno + 1),
        })?;
        entries.push((base.join(rgb.trim()), base.join(depth.trim())));
    }
    if !saw_header {
        return Err(Error::Manifest {
            path: path.into(),
            reason: "missing 'rgb,depth' header".into(),
        });
    }
    Ok(DatasetManifest {
        entries,
        depth_scale,
    })
}

/// Loads one manifest entry, checking that the pair shares dimensions.
pub fn load_pair(manifest: &DatasetManifest, index: usize) -> Result<(RgbImage, DepthMap)> {
    let (rgb_path, depth_path) = &manifest.entries[index];
    let rgb = load_rgb(rgb_path)?;
    let depth = load_depth(depth_path, manifest.depth_scale)?;
    check_dims(rgb.width(), rgb.height(), depth.width(), depth.height())?;
    Ok((rgb, depth))
}
