//! Discrete gradient and divergence with periodic (circular) boundaries.
//!
//! Forward differences are used throughout:
//!   dx(i, j) = f(i, (j+1) mod W) - f(i, j)
//!   dy(i, j) = f((i+1) mod H, j) - f(i, j)
//!
//! `divergence` is minus the adjoint of `gradient`, so the pair satisfies
//! <gradient(f), g> = -<f, divergence(g)> and the composition
//! divergence(gradient(f)) is the 5-point periodic Laplacian. Periodicity is
//! what lets the normal equations of the quadratic subproblems be solved
//! exactly in the frequency domain.

use crate::field::ScalarField;

/// Horizontal and vertical forward differences of a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair {
    pub dx: ScalarField,
    pub dy: ScalarField,
}

impl GradientPair {
    pub fn zeros(height: usize, width: usize) -> Self {
        GradientPair {
            dx: ScalarField::zeros(height, width),
            dy: ScalarField::zeros(height, width),
        }
    }

    pub fn height(&self) -> usize {
        self.dx.height()
    }

    pub fn width(&self) -> usize {
        self.dx.width()
    }

    /// Componentwise map over both directions.
    pub fn map(&self, f: impl Fn(f64) -> f64 + Copy) -> GradientPair {
        GradientPair {
            dx: self.dx.map(f),
            dy: self.dy.map(f),
        }
    }

    /// Componentwise combination with another pair.
    pub fn zip_map(&self, other: &GradientPair, f: impl Fn(f64, f64) -> f64 + Copy) -> GradientPair {
        GradientPair {
            dx: self.dx.zip_map(&other.dx, f),
            dy: self.dy.zip_map(&other.dy, f),
        }
    }

    /// Euclidean norm over both components.
    pub fn norm_l2(&self) -> f64 {
        let sx: f64 = self.dx.data().iter().map(|v| v * v).sum();
        let sy: f64 = self.dy.data().iter().map(|v| v * v).sum();
        (sx + sy).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite()
    }
}

/// Periodic forward-difference gradient.
pub fn gradient(f: &ScalarField) -> GradientPair {
    let (h, w) = (f.height(), f.width());
    let mut dx = ScalarField::zeros(h, w);
    let mut dy = ScalarField::zeros(h, w);
    for i in 0..h {
        let i_next = if i + 1 == h { 0 } else { i + 1 };
        for j in 0..w {
            let j_next = if j + 1 == w { 0 } else { j + 1 };
            *dx.at_mut(i, j) = f.at(i, j_next) - f.at(i, j);
            *dy.at_mut(i, j) = f.at(i_next, j) - f.at(i, j);
        }
    }
    GradientPair { dx, dy }
}

/// Periodic divergence: the negative adjoint of [`gradient`].
///
/// div(g)(i, j) = gx(i, j) - gx(i, j-1) + gy(i, j) - gy(i-1, j), indices
/// wrapping circularly.
pub fn divergence(g: &GradientPair) -> ScalarField {
    let (h, w) = (g.height(), g.width());
    let mut out = ScalarField::zeros(h, w);
    for i in 0..h {
        let i_prev = if i == 0 { h - 1 } else { i - 1 };
        for j in 0..w {
            let j_prev = if j == 0 { w - 1 } else { j - 1 };
            *out.at_mut(i, j) = g.dx.at(i, j) - g.dx.at(i, j_prev) + g.dy.at(i, j)
                - g.dy.at(i_prev, j);
        }
    }
    out
}
