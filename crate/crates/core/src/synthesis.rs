//! Forward haze synthesis: I = J t + (1 - t) A, with Beer-Lambert
//! transmission from a depth map. Used to build test fixtures with known
//! ground truth.

use crate::airlight::AtmosphericLight;
use crate::error::{Error, Result};
use crate::field::{ColorImage, ScalarField};

/// Blend a clean image toward the atmospheric light using one transmission
/// map per channel. Output clamped to [0, 1].
pub fn synthesize(
    clean: &ColorImage,
    t: &[ScalarField; 3],
    airlight: &AtmosphericLight,
) -> Result<ColorImage> {
    for map in t {
        if map.height() != clean.height() || map.width() != clean.width() {
            return Err(Error::DimensionMismatch {
                expected_h: clean.height(),
                expected_w: clean.width(),
                found_h: map.height(),
                found_w: map.width(),
            });
        }
    }
    let a = airlight.as_array();
    let mut out = ColorImage::filled(clean.height(), clean.width(), [0.0; 3]);
    for i in 0..clean.height() {
        for j in 0..clean.width() {
            let px = clean.pixel(i, j);
            let mut rgb = [0.0; 3];
            for c in 0..3 {
                let tv = t[c].at(i, j);
                rgb[c] = (px[c] * tv + (1.0 - tv) * a[c]).clamp(0.0, 1.0);
            }
            out.set_pixel(i, j, rgb);
        }
    }
    Ok(out)
}

/// Beer-Lambert attenuation: t = exp(-beta_c * depth).
pub fn depth_to_transmission(depth: &ScalarField, beta_c: f64) -> ScalarField {
    depth.map(|d| (-beta_c * d).exp())
}
