//! RMI input-space adaptation: raw RGB to {R, M = max(G, B), I}.
//!
//! Red light attenuates fastest underwater, so the gap between the R channel
//! and the strongest of G/B carries distance information; the intensity
//! channel preserves scene structure.

use crate::imagecore::RgbImage;

/// Rec.601 luma weights used for the I channel.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// H×W×3 image in (r, m, i) space, all channels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RmiImage {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl RmiImage {
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

    /// The intensity channel as a flat plane, for use as a filter guide.
    pub fn intensity_plane(&self) -> Vec<f64> {
        self.data.iter().map(|p| p[2]).collect()
    }

    /// (R, M, I) mapped onto (red, green, blue) for visual inspection.
    pub fn to_rgb_visualization(&self) -> RgbImage {
        RgbImage::from_pixels(self.width, self.height, self.data.clone())
    }
}

/// Per-pixel map (R, G, B) -> (R, max(G, B), Rec.601 luma).
pub fn rmi_transform(image: &RgbImage) -> RmiImage {
    let data = image
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            [
                r,
                g.max(b),
                LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b,
            ]
        })
        .collect();
    RmiImage {
        width: image.width(),
        height: image.height(),
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn luma_arithmetic() {
        let img = RgbImage::constant(1, 1, [0.2, 0.5, 0.3]);
        let rmi = rmi_transform(&img);
        let [r, m, i] = rmi.pixel(0, 0);
        assert_eq!(r, 0.2);
        assert_eq!(m, 0.5);
        assert!((i - 0.3875).abs() < 1e-12);
    }

    #[test]
    fn gray_pixel_fixed_point() {
        for c in [0.0, 0.25, 1.0] {
            let img = RgbImage::constant(2, 2, [c, c, c]);
            let rmi = rmi_transform(&img);
            for &[r, m, i] in rmi.pixels() {
                assert_eq!(r, c);
                assert_eq!(m, c);
                assert!((i - c).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn channel_invariants(r in 0f64..=1.0, g in 0f64..=1.0, b in 0f64..=1.0) {
            let img = RgbImage::constant(1, 1, [r, g, b]);
            let [or, m, i] = rmi_transform(&img).pixel(0, 0);
            prop_assert_eq!(or, r);
            prop_assert!(m >= g && m >= b);
            prop_assert!(m == g || m == b);
            let lo = r.min(g).min(b) - 1e-12;
            let hi = r.max(g).max(b) + 1e-12;
            prop_assert!(i >= lo && i <= hi);
            prop_assert!((0.0..=1.0).contains(&m) && (-1e-12..=1.0 + 1e-12).contains(&i));
        }

        #[test]
        fn monotone_in_red(r1 in 0f64..=1.0, r2 in 0f64..=1.0, g in 0f64..=1.0, b in 0f64..=1.0) {
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            let a = rmi_transform(&RgbImage::constant(1, 1, [lo, g, b])).pixel(0, 0);
            let c = rmi_transform(&RgbImage::constant(1, 1, [hi, g, b])).pixel(0, 0);
            prop_assert!(c[0] >= a[0]);
            prop_assert!(c[2] >= a[2]);
        }

        #[test]
        fn pixel_local(pixels in proptest::collection::vec([0f64..=1.0, 0f64..=1.0, 0f64..=1.0], 4)) {
            // permuting pixels commutes with the transform
            let fwd = rmi_transform(&RgbImage::from_pixels(2, 2, pixels.clone()));
            let mut rev_px = pixels;
            rev_px.reverse();
            let rev = rmi_transform(&RgbImage::from_pixels(2, 2, rev_px));
            let mut rev_out = rev.pixels().to_vec();
            rev_out.reverse();
            prop_assert_eq!(fwd.pixels(), &rev_out[..]);
        }
    }
}
