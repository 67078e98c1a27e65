//! Full-reference quality metrics on [0, 1] float images: PSNR over all
//! samples and mean local SSIM over the luminance plane (11x11 Gaussian
//! window, sigma 1.5, K1 = 0.01, K2 = 0.03).

use crate::coarse::luminance;
use crate::error::{Error, Result};
use crate::field::ColorImage;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// PSNR in decibels and mean SSIM for one image pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    /// Peak signal-to-noise ratio; `f64::INFINITY` for identical images.
    pub psnr_db: f64,
    /// Mean structural similarity in [-1, 1].
    pub ssim: f64,
}

/// Evaluate both metrics at once.
pub fn evaluate(a: &ColorImage, b: &ColorImage) -> Result<QualityReport> {
    Ok(QualityReport {
        psnr_db: psnr(a, b)?,
        ssim: ssim(a, b)?,
    })
}

/// 10 log10(1 / MSE) with the MSE taken over every pixel and channel.
/// Identical images return `f64::INFINITY`.
pub fn psnr(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch {
            expected_h: a.height(),
            expected_w: a.width(),
            found_h: b.height(),
            found_w: b.width(),
        });
    }
    let mse: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.data().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

/// Mean local SSIM over the luminance plane. Windows are fully contained in
/// the image (no padding), so both images must be at least 11x11.
pub fn ssim(a: &ColorImage, b: &ColorImage) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch {
            expected_h: a.height(),
            expected_w: a.width(),
            found_h: b.height(),
            found_w: b.width(),
        });
    }
    if a.height() < SSIM_WINDOW || a.width() < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            height: a.height(),
            width: a.width(),
            min: SSIM_WINDOW,
        });
    }

    let la = luminance(a);
    let lb = luminance(b);
    let kernel = gaussian_kernel();
    let c1 = (SSIM_K1 * 1.0f64).powi(2);
    let c2 = (SSIM_K2 * 1.0f64).powi(2);

    let (h, w) = (a.height(), a.width());
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..=h - SSIM_WINDOW {
        for j in 0..=w - SSIM_WINDOW {
            let mut mu_a = 0.0;
            let mut mu_b = 0.0;
            let mut aa = 0.0;
            let mut bb = 0.0;
            let mut ab = 0.0;
            for y in 0..SSIM_WINDOW {
                for x in 0..SSIM_WINDOW {
                    let k = kernel[y * SSIM_WINDOW + x];
                    let va = la.at(i + y, j + x);
                    let vb = lb.at(i + y, j + x);
                    mu_a += k * va;
                    mu_b += k * vb;
                    aa += k * va * va;
                    bb += k * vb * vb;
                    ab += k * va * vb;
                }
            }
            let var_a = aa - mu_a * mu_a;
            let var_b = bb - mu_b * mu_b;
            let cov = ab - mu_a * mu_b;
            let s = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            total += s;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

fn gaussian_kernel() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as isize;
    let mut k = Vec::with_capacity(SSIM_WINDOW * SSIM_WINDOW);
    for y in -half..=half {
        for x in -half..=half {
            let r2 = (x * x + y * y) as f64;
            k.push((-r2 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp());
        }
    }
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(h: usize, w: usize, seed: u64) -> ColorImage {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
        ColorImage::from_fn(h, w, |_, _| {
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 1000) as f64 / 1000.0
            };
            [next(), next(), next()]
        })
    }

    #[test]
    fn psnr_of_identical_images_is_infinite() {
        let img = textured(12, 12, 1);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_of_uniform_offset_is_twenty_db() {
        let a = ColorImage::filled(16, 16, [0.2, 0.2, 0.2]);
        let b = ColorImage::filled(16, 16, [0.3, 0.3, 0.3]);
        let p = psnr(&a, &b).unwrap();
        assert!((p - 20.0).abs() < 1e-9, "got {p}");
    }

    #[test]
    fn psnr_matches_two_pass_reference() {
        let a = textured(9, 13, 3);
        let b = textured(9, 13, 4);
        // Independent two-pass: accumulate the sum of squares separately per
        // channel, then combine.
        let mut per_channel = [0.0f64; 3];
        for i in 0..9 {
            for j in 0..13 {
                let (x, y) = (a.pixel(i, j), b.pixel(i, j));
                for c in 0..3 {
                    per_channel[c] += (x[c] - y[c]).powi(2);
                }
            }
        }
        let mse = per_channel.iter().sum::<f64>() / (9.0 * 13.0 * 3.0);
        let expected = -10.0 * mse.log10();
        assert!((psnr(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn psnr_decreases_with_noise_amplitude() {
        let a = textured(10, 10, 7);
        let mut last = f64::INFINITY;
        for amp in [0.01, 0.05, 0.1, 0.2] {
            let b = ColorImage::from_fn(10, 10, |i, j| {
                let px = a.pixel(i, j);
                let sign = if (i * 10 + j) % 2 == 0 { 1.0 } else { -1.0 };
                px.map(|v| (v + sign * amp).clamp(0.0, 1.0))
            });
            let p = psnr(&a, &b).unwrap();
            assert!(p < last, "amp {amp}: {p} !< {last}");
            last = p;
        }
    }

    #[test]
    fn ssim_of_identical_images_is_one() {
        let img = textured(14, 14, 5);
        let s = ssim(&img, &img).unwrap();
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ssim_is_symmetric() {
        let a = textured(13, 17, 8);
        let b = textured(13, 17, 9);
        let ab = ssim(&a, &b).unwrap();
        let ba = ssim(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!((-1.0..=1.0).contains(&ab));
    }

    #[test]
    fn ssim_constant_offset_closed_form() {
        // Constant images: contrast and structure terms are exactly 1, so
        // SSIM reduces to the luminance term.
        let (mu_a, mu_b) = (0.2, 0.7);
        let a = ColorImage::filled(12, 12, [mu_a, mu_a, mu_a]);
        let b = ColorImage::filled(12, 12, [mu_b, mu_b, mu_b]);
        let c1 = 0.01f64.powi(2);
        let expected = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
        let s = ssim(&a, &b).unwrap();
        assert!((s - expected).abs() < 1e-9, "{s} vs {expected}");
    }

    #[test]
    fn small_images_are_rejected() {
        let a = textured(10, 12, 2);
        assert!(matches!(
            ssim(&a, &a),
            Err(Error::ImageTooSmall { .. })
        ));
        let b = textured(12, 12, 2);
        assert!(psnr(&a, &b).is_err());
    }
}
