//! Image containers: a scalar per-pixel map and an RGB image, both stored
//! row-major in `f64`. Pixel values are nominally in `[0, 1]`.

use crate::error::{Error, Result};

/// A real-valued map with one value per pixel (transmission, luminance,
/// weights, dark channel, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, 0.0)
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        assert!(height >= 1 && width >= 1, "field must be at least 1x1");
        ScalarField {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    /// Build a field by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        ScalarField {
            height,
            width,
            data,
        }
    }

    pub fn from_data(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("field dimensions", "height and width must be >= 1"));
        }
        if data.len() != height * width {
            return Err(Error::invalid(
                "field data",
                format!("expected {} values, got {}", height * width, data.len()),
            ));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("field data", "non-finite value"));
        }
        Ok(ScalarField {
            height,
            width,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut f64 {
        &mut self.data[row * self.width + col]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn same_dims(&self, other: &ScalarField) -> bool {
        self.height == other.height && self.width == other.width
    }

    /// Elementwise map into a new field.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two same-sized fields.
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        assert!(self.same_dims(other), "field dimensions differ");
        ScalarField {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Elementwise clamp to `[lo, hi]`.
    pub fn clamp(&self, lo: f64, hi: f64) -> ScalarField {
        assert!(lo <= hi, "clamp bounds inverted");
        self.map(|v| v.clamp(lo, hi))
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Euclidean norm of the field seen as a flat vector.
    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &ScalarField) -> f64 {
        assert!(self.same_dims(other), "field dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    /// Sliding-window minimum over an odd `window` centered at each pixel,
    /// truncated at the image borders (min over the in-image part only).
    ///
    /// The rectangular window factors into a row pass and a column pass.
    pub fn window_min(&self, window: usize) -> ScalarField {
        assert!(window % 2 == 1 && window >= 1, "window must be odd and >= 1");
        if window == 1 {
            return self.clone();
        }
        let half = window / 2;
        let (h, w) = (self.height, self.width);

        // Horizontal pass.
        let mut rows = ScalarField::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                let lo = j.saturating_sub(half);
                let hi = (j + half).min(w - 1);
                let mut m = f64::INFINITY;
                for k in lo..=hi {
                    m = m.min(self.at(i, k));
                }
                *rows.at_mut(i, j) = m;
            }
        }

        // Vertical pass over the row minima.
        let mut out = ScalarField::zeros(h, w);
        for j in 0..w {
            for i in 0..h {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(h - 1);
                let mut m = f64::INFINITY;
                for k in lo..=hi {
                    m = m.min(rows.at(k, j));
                }
                *out.at_mut(i, j) = m;
            }
        }
        out
    }
}

/// An H x W x 3 image with interleaved RGB samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl ColorImage {
    pub fn filled(height: usize, width: usize, rgb: [f64; 3]) -> Self {
        assert!(height >= 1 && width >= 1, "image must be at least 1x1");
        let mut data = Vec::with_capacity(height * width * 3);
        for _ in 0..height * width {
            data.extend_from_slice(&rgb);
        }
        ColorImage {
            height,
            width,
            data,
        }
    }

    /// Build an image by evaluating `f(row, col) -> [r, g, b]` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> [f64; 3]) -> Self {
        let mut data = Vec::with_capacity(height * width * 3);
        for i in 0..height {
            for j in 0..width {
                data.extend_from_slice(&f(i, j));
            }
        }
        ColorImage {
            height,
            width,
            data,
        }
    }

    pub fn from_data(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("image dimensions", "height and width must be >= 1"));
        }
        if data.len() != height * width * 3 {
            return Err(Error::invalid(
                "image data",
                format!("expected {} values, got {}", height * width * 3, data.len()),
            ));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("image data", "non-finite value"));
        }
        Ok(ColorImage {
            height,
            width,
            data,
        })
    }

    /// Assemble an image from three same-sized channel fields.
    pub fn from_channels(r: &ScalarField, g: &ScalarField, b: &ScalarField) -> Result<Self> {
        if !r.same_dims(g) || !r.same_dims(b) {
            return Err(Error::invalid("channels", "channel dimensions differ"));
        }
        let mut data = Vec::with_capacity(r.len() * 3);
        for k in 0..r.len() {
            data.push(r.data()[k]);
            data.push(g.data()[k]);
            data.push(b.data()[k]);
        }
        Ok(ColorImage {
            height: r.height(),
            width: r.width(),
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> [f64; 3] {
        let k = (row * self.width + col) * 3;
        [self.data[k], self.data[k + 1], self.data[k + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, row: usize, col: usize, rgb: [f64; 3]) {
        let k = (row * self.width + col) * 3;
        self.data[k..k + 3].copy_from_slice(&rgb);
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Extract one color channel (0 = R, 1 = G, 2 = B) as a scalar field.
    pub fn channel(&self, c: usize) -> ScalarField {
        assert!(c < 3, "channel index out of range");
        let data = self.data[c..].iter().step_by(3).copied().collect();
        ScalarField {
            height: self.height,
            width: self.width,
            data,
        }
    }

    pub fn same_dims(&self, other: &ColorImage) -> bool {
        self.height == other.height && self.width == other.width
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Elementwise clamp of every sample to `[lo, hi]`.
    pub fn clamp(&self, lo: f64, hi: f64) -> ColorImage {
        assert!(lo <= hi, "clamp bounds inverted");
        ColorImage {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|v| v.clamp(lo, hi)).collect(),
        }
    }
}
