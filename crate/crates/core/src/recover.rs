//! Haze-free image reconstruction from the scattering model:
//! J_c = (I_c - A_c) / max(t_c, t_eps) + A_c, clamped to [0, 1].

use crate::airlight::AtmosphericLight;
use crate::error::{Error, Result};
use crate::field::{ColorImage, ScalarField};

/// Invert the scattering model with one transmission map per channel.
pub fn recover(
    hazy: &ColorImage,
    t: &[ScalarField; 3],
    airlight: &AtmosphericLight,
    t_eps: f64,
) -> Result<ColorImage> {
    if !(t_eps > 0.0 && t_eps < 1.0) {
        return Err(Error::invalid("t_eps", format!("{t_eps} not in (0, 1)")));
    }
    for (c, map) in t.iter().enumerate() {
        if map.height() != hazy.height() || map.width() != hazy.width() {
            return Err(Error::DimensionMismatch {
                expected_h: hazy.height(),
                expected_w: hazy.width(),
                found_h: map.height(),
                found_w: map.width(),
            });
        }
        if !map.is_finite() {
            return Err(Error::invalid("transmission", format!("channel {c} is non-finite")));
        }
    }
    let a = airlight.as_array();
    let mut out = ColorImage::filled(hazy.height(), hazy.width(), [0.0; 3]);
    for i in 0..hazy.height() {
        for j in 0..hazy.width() {
            let px = hazy.pixel(i, j);
            let mut rgb = [0.0; 3];
            for c in 0..3 {
                let tv = t[c].at(i, j).max(t_eps);
                rgb[c] = ((px[c] - a[c]) / tv + a[c]).clamp(0.0, 1.0);
            }
            out.set_pixel(i, j, rgb);
        }
    }
    Ok(out)
}

/// Average the three channel maps into one, for the classic single-map
/// variant of the recovery step.
pub fn mean_transmission(t: &[ScalarField; 3]) -> ScalarField {
    let mut out = t[0].clone();
    for k in 0..out.len() {
        out.data_mut()[k] = (t[0].data()[k] + t[1].data()[k] + t[2].data()[k]) / 3.0;
    }
    out
}
