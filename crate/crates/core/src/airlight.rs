//! Global atmospheric light estimation.
//!
//! The scattering model never says where A comes from; the conventional
//! procedure is used: take the brightest fraction of dark-channel pixels and
//! average the hazy image over them, per channel.

use crate::error::{Error, Result};
use crate::field::{ColorImage, ScalarField};

/// Lower clamp on each estimated component; the DCP transmission formula
/// divides by A_c, so components must stay away from zero.
pub const A_MIN: f64 = 0.05;

/// Default fraction of dark-channel pixels used for the estimate (0.1%).
pub const DEFAULT_TOP_FRACTION: f64 = 0.001;

/// The global atmospheric light, one component per color channel, each in
/// `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphericLight {
    pub a_r: f64,
    pub a_g: f64,
    pub a_b: f64,
}

impl AtmosphericLight {
    pub fn new(a_r: f64, a_g: f64, a_b: f64) -> Result<Self> {
        for (name, v) in [("a_r", a_r), ("a_g", a_g), ("a_b", a_b)] {
            if !(v.is_finite() && v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(
                    "atmospheric light",
                    format!("{name} = {v} must lie in (0, 1]"),
                ));
            }
        }
        Ok(AtmosphericLight { a_r, a_g, a_b })
    }

    #[inline]
    pub fn channel(&self, c: usize) -> f64 {
        match c {
            0 => self.a_r,
            1 => self.a_g,
            2 => self.a_b,
            _ => panic!("channel index out of range"),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a_r, self.a_g, self.a_b]
    }
}

/// Estimate A from the hazy image.
///
/// Computes the raw dark channel (min over channels, then a `patch`-sized
/// window minimum), selects the `top_fraction` brightest dark-channel pixels
/// (at least one), and returns the per-channel mean of the hazy image over
/// that set, clamped to `[A_MIN, 1]`. An all-black image therefore yields
/// `(A_MIN, A_MIN, A_MIN)` instead of failing.
pub fn estimate_airlight(
    hazy: &ColorImage,
    patch: usize,
    top_fraction: f64,
) -> Result<AtmosphericLight> {
    if !(top_fraction > 0.0 && top_fraction <= 1.0) {
        return Err(Error::invalid(
            "top_fraction",
            format!("{top_fraction} must lie in (0, 1]"),
        ));
    }
    if patch % 2 == 0 {
        return Err(Error::invalid("patch", format!("{patch} must be odd")));
    }

    let min_rgb = ScalarField::from_fn(hazy.height(), hazy.width(), |i, j| {
        let [r, g, b] = hazy.pixel(i, j);
        r.min(g).min(b)
    });
    let dark = min_rgb.window_min(patch);

    let n = dark.len();
    let count = ((top_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    // Brightest dark-channel pixels first; ties broken by index for
    // determinism.
    order.sort_by(|&a, &b| {
        dark.data()[b]
            .partial_cmp(&dark.data()[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut sum = [0.0f64; 3];
    for &k in &order[..count] {
        let (i, j) = (k / hazy.width(), k % hazy.width());
        let px = hazy.pixel(i, j);
        for c in 0..3 {
            sum[c] += px[c];
        }
    }
    let mean = sum.map(|s| (s / count as f64).clamp(A_MIN, 1.0));
    AtmosphericLight::new(mean[0], mean[1], mean[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_images_return_their_color() {
        let white = ColorImage::filled(8, 8, [1.0, 1.0, 1.0]);
        let a = estimate_airlight(&white, 3, 0.001).unwrap();
        assert_eq!(a.as_array(), [1.0, 1.0, 1.0]);

        let gray = ColorImage::filled(8, 8, [0.5, 0.5, 0.5]);
        let a = estimate_airlight(&gray, 3, 0.001).unwrap();
        assert_eq!(a.as_array(), [0.5, 0.5, 0.5]);
    }

    #[test]
    fn all_black_image_hits_floor() {
        let black = ColorImage::filled(6, 6, [0.0, 0.0, 0.0]);
        let a = estimate_airlight(&black, 3, 0.01).unwrap();
        assert_eq!(a.as_array(), [A_MIN, A_MIN, A_MIN]);
    }

    #[test]
    fn bright_corner_dominates() {
        // 10x10 image with a 3x3 bright-haze corner; brute-force ranking of
        // the 100 dark-channel values says the corner wins.
        let img = ColorImage::from_fn(10, 10, |i, j| {
            if i < 3 && j < 3 {
                [0.9, 0.9, 0.9]
            } else {
                [0.2, 0.2, 0.2]
            }
        });
        // patch = 1, top 5% -> 5 pixels, all from the 9-pixel corner.
        let a = estimate_airlight(&img, 1, 0.05).unwrap();
        assert_eq!(a.as_array(), [0.9, 0.9, 0.9]);
    }

    #[test]
    fn row_permutation_invariance_with_unit_patch() {
        let img = ColorImage::from_fn(7, 5, |i, j| {
            let v = ((i * 13 + j * 7) % 11) as f64 / 11.0;
            [v, (v + 0.3).min(1.0), v * 0.5 + 0.1]
        });
        let mut rows: Vec<usize> = (0..7).collect();
        rows.rotate_left(3);
        let shuffled = ColorImage::from_fn(7, 5, |i, j| img.pixel(rows[i], j));
        let a0 = estimate_airlight(&img, 1, 0.2).unwrap();
        let a1 = estimate_airlight(&shuffled, 1, 0.2).unwrap();
        for c in 0..3 {
            assert!((a0.channel(c) - a1.channel(c)).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_scales_the_estimate() {
        // Values kept bright enough that the A_MIN clamp stays inactive.
        let img = ColorImage::from_fn(6, 6, |i, j| {
            let v = 0.5 + 0.5 * ((i * 5 + j * 3) % 9) as f64 / 9.0;
            [v, v * 0.9, v * 0.8]
        });
        let half = ColorImage::from_fn(6, 6, |i, j| img.pixel(i, j).map(|v| 0.5 * v));
        let a = estimate_airlight(&img, 1, 0.1).unwrap();
        let a_half = estimate_airlight(&half, 1, 0.1).unwrap();
        for c in 0..3 {
            assert!((a_half.channel(c) - 0.5 * a.channel(c)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let img = ColorImage::filled(4, 4, [0.5, 0.5, 0.5]);
        assert!(estimate_airlight(&img, 2, 0.1).is_err());
        assert!(estimate_airlight(&img, 3, 0.0).is_err());
        assert!(estimate_airlight(&img, 3, 1.5).is_err());
        assert!(AtmosphericLight::new(0.0, 0.5, 0.5).is_err());
        assert!(AtmosphericLight::new(0.5, 0.5, 1.2).is_err());
    }
}
