//! Coarse transmission estimation by weighted fusion.
//!
//! Two candidate maps are blended per pixel: a dark-channel-based map that is
//! reliable over foreground objects, and a luminance-based map that behaves
//! in bright sky regions where the dark-channel assumption breaks down. A
//! sigmoid weight built from the range-normalized dark-channel map decides
//! which candidate dominates. The luminance map depends on a per-channel
//! scattering coefficient, so the fused result is one map per color channel
//! while the dark-channel map and the weight are shared.

use crate::airlight::AtmosphericLight;
use crate::error::{Error, Result};
use crate::field::{ColorImage, ScalarField};

/// Parameters of the fusion stage.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionParams {
    /// Strength of the dark-channel term.
    pub omega: f64,
    /// Odd window size of the dark-channel minimum filter.
    pub window: usize,
    /// Depth-range scale applied to the corrected luminance.
    pub tau: f64,
    /// Per-channel scattering coefficients (red, green, blue).
    pub beta_r: f64,
    pub beta_g: f64,
    pub beta_b: f64,
    /// Percentile of the luminance used as the normalization reference.
    pub percentile: f64,
}

impl Default for FusionParams {
    fn default() -> Self {
        FusionParams {
            omega: 0.95,
            window: 21,
            tau: 3.4,
            beta_r: 0.3324,
            beta_g: 0.3433,
            beta_b: 0.3502,
            percentile: 0.95,
        }
    }
}

impl FusionParams {
    pub fn beta(&self, c: usize) -> f64 {
        match c {
            0 => self.beta_r,
            1 => self.beta_g,
            2 => self.beta_b,
            _ => panic!("channel index out of range"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::invalid("omega", format!("{} not in (0, 1]", self.omega)));
        }
        if self.window % 2 == 0 || self.window < 1 {
            return Err(Error::invalid("window", format!("{} must be odd and >= 1", self.window)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::invalid("tau", format!("{} must be > 0", self.tau)));
        }
        for (name, b) in [("beta_r", self.beta_r), ("beta_g", self.beta_g), ("beta_b", self.beta_b)] {
            if !(b > 0.0) {
                return Err(Error::invalid("beta", format!("{name} = {b} must be > 0")));
            }
        }
        if !(self.percentile > 0.0 && self.percentile < 1.0) {
            return Err(Error::invalid("percentile", format!("{} not in (0, 1)", self.percentile)));
        }
        Ok(())
    }
}

/// Every map produced by the coarse stage, kept around for diagnostics.
#[derive(Debug, Clone)]
pub struct CoarseMaps {
    /// Dark-channel transmission, shared across channels.
    pub t_dcp: ScalarField,
    /// Corrected luminance, shared across channels.
    pub luminance_hat: ScalarField,
    /// Fusion weight, shared across channels.
    pub chi: ScalarField,
    /// Luminance transmission per channel.
    pub t_lum: [ScalarField; 3],
    /// Fused coarse transmission per channel.
    pub t_coarse: [ScalarField; 3],
}

/// Dark channel normalized by the atmospheric light:
/// min over channels of I_c / A_c, then a window minimum truncated at the
/// image borders.
pub fn dark_channel(hazy: &ColorImage, airlight: &AtmosphericLight, window: usize) -> ScalarField {
    assert!(window % 2 == 1, "window must be odd");
    let a = airlight.as_array();
    let normalized = ScalarField::from_fn(hazy.height(), hazy.width(), |i, j| {
        let px = hazy.pixel(i, j);
        (px[0] / a[0]).min(px[1] / a[1]).min(px[2] / a[2])
    });
    normalized.window_min(window)
}

/// Dark-channel transmission: 1 - omega * dark, clamped to [0, 1].
pub fn dcp_transmission(dark: &ScalarField, omega: f64) -> ScalarField {
    dark.map(|d| (1.0 - omega * d).clamp(0.0, 1.0))
}

/// Rec. 601 luma of an RGB image.
pub fn luminance(hazy: &ColorImage) -> ScalarField {
    ScalarField::from_fn(hazy.height(), hazy.width(), |i, j| {
        let [r, g, b] = hazy.pixel(i, j);
        0.299 * r + 0.587 * g + 0.114 * b
    })
}

/// Rescale the luminance so its `percentile` value maps to `tau`:
/// L_hat = (tau / L*) * L with L* the nearest-rank percentile of L.
/// An all-zero luminance (black image) returns an all-zero field.
pub fn corrected_luminance(lum: &ScalarField, tau: f64, percentile: f64) -> ScalarField {
    let l_star = nearest_rank_percentile(lum.data(), percentile);
    if l_star == 0.0 {
        return ScalarField::zeros(lum.height(), lum.width());
    }
    let scale = tau / l_star;
    lum.map(|v| scale * v)
}

/// Nearest-rank percentile of a slice: the value at 1-indexed rank
/// ceil(p * n) of the ascending order.
fn nearest_rank_percentile(values: &[f64], p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Luminance transmission: exp(-beta_c * L_hat), in (0, 1] for L_hat >= 0.
pub fn luminance_transmission(lum_hat: &ScalarField, beta_c: f64) -> ScalarField {
    lum_hat.map(|v| (-beta_c * v).exp())
}

/// Sigmoid fusion weight over the range-normalized dark-channel
/// transmission.
///
/// chi = 1 / (1 + exp(-(theta1 * t_d + theta2))) with
/// theta1 = 20 / (max - min) and theta2 = -10 - theta1 * min, which maps the
/// value range of t_d onto sigmoid exponents [-10, +10]. A constant t_d has
/// no foreground/sky separation to offer and yields chi = 0.5 everywhere.
pub fn fusion_weight(t_dcp: &ScalarField) -> ScalarField {
    let min = t_dcp.min_value();
    let max = t_dcp.max_value();
    if max == min {
        return ScalarField::filled(t_dcp.height(), t_dcp.width(), 0.5);
    }
    let theta1 = 20.0 / (max - min);
    let theta2 = -10.0 - theta1 * min;
    t_dcp.map(|v| 1.0 / (1.0 + (-(theta1 * v + theta2)).exp()))
}

/// Pointwise convex combination t = chi * t_d + (1 - chi) * t_l, clamped to
/// [0, 1].
pub fn fuse(t_dcp: &ScalarField, t_lum: &ScalarField, chi: &ScalarField) -> ScalarField {
    assert!(t_dcp.same_dims(t_lum) && t_dcp.same_dims(chi));
    let mut out = ScalarField::zeros(t_dcp.height(), t_dcp.width());
    for k in 0..out.len() {
        let c = chi.data()[k];
        out.data_mut()[k] = (c * t_dcp.data()[k] + (1.0 - c) * t_lum.data()[k]).clamp(0.0, 1.0);
    }
    out
}

/// Full coarse stage: one fused transmission map per color channel, plus all
/// intermediate maps.
pub fn coarse_transmission(
    hazy: &ColorImage,
    airlight: &AtmosphericLight,
    params: &FusionParams,
) -> Result<CoarseMaps> {
    params.validate()?;
    let dark = dark_channel(hazy, airlight, params.window);
    let t_dcp = dcp_transmission(&dark, params.omega);
    let lum_hat = corrected_luminance(&luminance(hazy), params.tau, params.percentile);
    let chi = fusion_weight(&t_dcp);
    let t_lum = [
        luminance_transmission(&lum_hat, params.beta_r),
        luminance_transmission(&lum_hat, params.beta_g),
        luminance_transmission(&lum_hat, params.beta_b),
    ];
    let t_coarse = [
        fuse(&t_dcp, &t_lum[0], &chi),
        fuse(&t_dcp, &t_lum[1], &chi),
        fuse(&t_dcp, &t_lum[2], &chi),
    ];
    Ok(CoarseMaps {
        t_dcp,
        luminance_hat: lum_hat,
        chi,
        t_lum,
        t_coarse,
    })
}
