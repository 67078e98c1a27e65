//! Deterministic synthetic scenes for tests, benchmarks and demos. No RNG
//! state is involved: every pixel is a pure function of its coordinates, so
//! fixtures are bit-identical across runs and platforms.

use crate::field::{ColorImage, ScalarField};

/// Integer hash mapped to [0, 1). splitmix64 finalizer.
fn hash01(i: usize, j: usize, salt: u64) -> f64 {
    let mut z = (i as u64)
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add((j as u64).wrapping_mul(0xbf58476d1ce4e5b9))
        .wrapping_add(salt.wrapping_mul(0x94d049bb133111eb));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// A small synthetic landscape: bright sky with a gradient, a mountain
/// silhouette, and textured ground scattered with dark objects (so the dark
/// channel behaves as it would on a natural outdoor photo).
pub fn clean_scene(size: usize) -> ColorImage {
    assert!(size >= 16, "scene too small to be interesting");
    let horizon = (0.35 * size as f64) as usize;
    ColorImage::from_fn(size, size, |i, j| {
        let fi = i as f64 / size as f64;
        let fj = j as f64 / size as f64;
        // Mountain silhouette height varies along the columns.
        let ridge = horizon as f64
            + 0.10 * size as f64 * (fj * 9.0).sin().abs()
            + 0.03 * size as f64 * (fj * 23.0 + 1.3).sin();
        if (i as f64) < ridge.min(horizon as f64) {
            // Sky: brighter toward the horizon, faint blue cast.
            let g = fi / 0.35;
            let n = 0.02 * (hash01(i, j, 1) - 0.5);
            [
                (0.55 + 0.20 * g + n).clamp(0.0, 1.0),
                (0.62 + 0.18 * g + n).clamp(0.0, 1.0),
                (0.80 + 0.10 * g + n).clamp(0.0, 1.0),
            ]
        } else if (i as f64) < ridge {
            // Distant hills.
            let n = 0.05 * hash01(i, j, 2);
            [0.28 + n, 0.32 + n, 0.40 + n]
        } else {
            // Ground: green-brown texture with dark rocks and a few bright
            // patches.
            let coarse = hash01(i / 6, j / 6, 3);
            let fine = hash01(i, j, 4);
            let v = 0.30 + 0.28 * coarse + 0.10 * fine;
            let mut rgb = [v * 0.85, v, v * 0.55];
            if hash01(i / 3, j / 3, 5) < 0.10 {
                // Rock / shadow: nearly black, feeds the dark channel.
                rgb = [v * 0.12, v * 0.12, v * 0.14];
            } else if hash01(i / 2, j / 2, 6) < 0.02 {
                rgb = [0.85, 0.78, 0.30];
            }
            rgb.map(|c| c.clamp(0.0, 1.0))
        }
    })
}

/// A two-tone image with one strong vertical edge and a narrow dark stripe
/// on each half. Noise-free, so flat regions have exactly zero gradient; the
/// dark stripes give the dark channel genuine near-black content the way
/// shadows do in outdoor photos.
pub fn step_edge(size: usize) -> ColorImage {
    ColorImage::from_fn(size, size, |_, j| {
        if (size / 4..size / 4 + 3).contains(&j) || (3 * size / 4..3 * size / 4 + 3).contains(&j) {
            [0.05, 0.06, 0.07]
        } else if j < size / 2 {
            [0.30, 0.34, 0.38]
        } else {
            [0.60, 0.56, 0.52]
        }
    })
}

/// Linear depth ramp from 0 at the top row to `max_depth` at the bottom row.
pub fn ramp_depth(height: usize, width: usize, max_depth: f64) -> ScalarField {
    assert!(max_depth >= 0.0);
    if height == 1 {
        return ScalarField::filled(1, width, max_depth);
    }
    ScalarField::from_fn(height, width, |i, _| {
        max_depth * i as f64 / (height - 1) as f64
    })
}

/// Uniform pseudo-random image, seeded; for stress tests.
pub fn noise_image(height: usize, width: usize, seed: u64) -> ColorImage {
    ColorImage::from_fn(height, width, |i, j| {
        [
            hash01(i, j, seed.wrapping_mul(3).wrapping_add(11)),
            hash01(i, j, seed.wrapping_mul(3).wrapping_add(12)),
            hash01(i, j, seed.wrapping_mul(3).wrapping_add(13)),
        ]
    })
}
