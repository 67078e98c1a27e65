//! Frequency-domain utilities: 2D FFT over the periodic grid and the
//! transfer spectra of the forward-difference operators.
//!
//! With circular boundaries every difference operator is circulant, so it is
//! diagonal in the Fourier basis. The transfer value of the horizontal
//! forward difference at column frequency k is exp(2*pi*i*k/W) - 1, and
//! likewise in the vertical direction; their squared magnitudes sum to the
//! spectrum of the negative Laplacian used by the quadratic solves.

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::TAU;
use std::sync::Arc;

use crate::field::ScalarField;

pub type Complex64 = Complex<f64>;

/// Planned 2D FFT for one grid size.
pub struct Spectral {
    height: usize,
    width: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(height: usize, width: usize) -> Self {
        assert!(height >= 1 && width >= 1);
        let mut planner = FftPlanner::new();
        Spectral {
            height,
            width,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Forward 2D FFT of a real field, row-major spectrum.
    pub fn forward(&self, f: &ScalarField) -> Vec<Complex64> {
        assert_eq!(f.height(), self.height);
        assert_eq!(f.width(), self.width);
        let mut buf: Vec<Complex64> = f.data().iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.row_fwd.process(&mut buf);
        let mut t = transpose(&buf, self.height, self.width);
        self.col_fwd.process(&mut t);
        transpose(&t, self.width, self.height)
    }

    /// Inverse 2D FFT; returns the real part. The imaginary residue of a
    /// spectrum assembled from real-field transforms is at rounding level
    /// and is discarded.
    pub fn inverse(&self, spectrum: &[Complex64]) -> ScalarField {
        assert_eq!(spectrum.len(), self.height * self.width);
        let mut buf = spectrum.to_vec();
        self.row_inv.process(&mut buf);
        let mut t = transpose(&buf, self.height, self.width);
        self.col_inv.process(&mut t);
        let full = transpose(&t, self.width, self.height);
        let scale = 1.0 / (self.height * self.width) as f64;
        ScalarField::from_fn(self.height, self.width, |i, j| {
            full[i * self.width + j].re * scale
        })
    }
}

fn transpose(buf: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex::new(0.0, 0.0); buf.len()];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = buf[i * cols + j];
        }
    }
    out
}

/// Per-frequency transfer values of the periodic forward differences,
/// returned as row-major `(dx, dy)` spectra of size `height * width`.
///
/// The zero frequency of both is exactly 0, so `|dx|^2 + |dy|^2` (the
/// spectrum of the negative Laplacian) vanishes only at DC.
pub fn gradient_transfer_spectrum(height: usize, width: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    assert!(height >= 1 && width >= 1);
    let mut dx = Vec::with_capacity(height * width);
    let mut dy = Vec::with_capacity(height * width);
    for i in 0..height {
        let wy = TAU * i as f64 / height as f64;
        let ty = Complex::new(wy.cos() - 1.0, wy.sin());
        for j in 0..width {
            let wx = TAU * j as f64 / width as f64;
            dx.push(Complex::new(wx.cos() - 1.0, wx.sin()));
            dy.push(ty);
        }
    }
    (dx, dy)
}

/// Squared-magnitude spectrum `|dx|^2 + |dy|^2` of the gradient operator.
pub fn laplacian_spectrum(height: usize, width: usize) -> Vec<f64> {
    let (dx, dy) = gradient_transfer_spectrum(height, width);
    dx.iter()
        .zip(&dy)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect()
}
