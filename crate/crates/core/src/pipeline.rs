//! End-to-end composition: airlight estimation, coarse fusion, per-channel
//! refinement, and scattering-model recovery.

use crate::airlight::{estimate_airlight, AtmosphericLight, DEFAULT_TOP_FRACTION};
use crate::coarse::{coarse_transmission, CoarseMaps, FusionParams};
use crate::error::{Error, Result};
use crate::field::{ColorImage, ScalarField};
use crate::recover::{mean_transmission, recover};
use crate::refine::{refine, IterationStats, RefineParams};

/// Every knob of the full pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub fusion: FusionParams,
    pub refine: RefineParams,
    /// Fixed atmospheric light; estimated from the image when absent.
    pub airlight: Option<[f64; 3]>,
    /// Fraction of dark-channel pixels feeding the airlight estimate.
    pub airlight_top_fraction: f64,
    /// Recover with the channel-averaged transmission map instead of one map
    /// per channel.
    pub mono_t: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            fusion: FusionParams::default(),
            refine: RefineParams::default(),
            airlight: None,
            airlight_top_fraction: DEFAULT_TOP_FRACTION,
            mono_t: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.fusion.validate()?;
        self.refine.validate()?;
        if let Some(a) = self.airlight {
            AtmosphericLight::new(a[0], a[1], a[2])?;
        }
        if !(self.airlight_top_fraction > 0.0 && self.airlight_top_fraction <= 1.0) {
            return Err(Error::invalid(
                "airlight_top_fraction",
                format!("{} not in (0, 1]", self.airlight_top_fraction),
            ));
        }
        Ok(())
    }
}

/// Everything the pipeline produced, including intermediates for
/// diagnostics.
#[derive(Debug, Clone)]
pub struct DehazeOutput {
    pub image: ColorImage,
    pub airlight: AtmosphericLight,
    /// Refined per-channel transmission actually used by the recovery step.
    pub transmission: [ScalarField; 3],
    pub coarse: CoarseMaps,
    /// Per-channel solver traces (R, G, B).
    pub traces: [Vec<IterationStats>; 3],
}

/// Run the full pipeline on a hazy image.
pub fn dehaze(hazy: &ColorImage, config: &PipelineConfig) -> Result<DehazeOutput> {
    config.validate()?;
    let airlight = match config.airlight {
        Some([r, g, b]) => AtmosphericLight::new(r, g, b)?,
        None => estimate_airlight(hazy, config.fusion.window, config.airlight_top_fraction)?,
    };
    let coarse = coarse_transmission(hazy, &airlight, &config.fusion)?;

    let mut maps = Vec::with_capacity(3);
    let mut traces = Vec::with_capacity(3);
    for c in 0..3 {
        let refined = refine(
            &coarse.t_coarse[c],
            &hazy.channel(c),
            airlight.channel(c),
            &config.refine,
        )?;
        maps.push(refined.transmission);
        traces.push(refined.trace);
    }
    let mut transmission: [ScalarField; 3] = [
        maps.remove(0),
        maps.remove(0),
        maps.remove(0),
    ];
    if config.mono_t {
        let mean = mean_transmission(&transmission);
        transmission = [mean.clone(), mean.clone(), mean];
    }

    let image = recover(hazy, &transmission, &airlight, config.refine.t_eps)?;
    let traces: [Vec<IterationStats>; 3] = [
        traces.remove(0),
        traces.remove(0),
        traces.remove(0),
    ];
    Ok(DehazeOutput {
        image,
        airlight,
        transmission,
        coarse,
        traces,
    })
}

/// Recover directly with a user-provided transmission map, bypassing both
/// estimation and refinement. The map is clamped to `[t_eps, 1]` and applied
/// to all three channels.
pub fn dehaze_with_transmission(
    hazy: &ColorImage,
    map: &ScalarField,
    config: &PipelineConfig,
) -> Result<ColorImage> {
    config.validate()?;
    if map.height() != hazy.height() || map.width() != hazy.width() {
        return Err(Error::DimensionMismatch {
            expected_h: hazy.height(),
            expected_w: hazy.width(),
            found_h: map.height(),
            found_w: map.width(),
        });
    }
    let airlight = match config.airlight {
        Some([r, g, b]) => AtmosphericLight::new(r, g, b)?,
        None => estimate_airlight(hazy, config.fusion.window, config.airlight_top_fraction)?,
    };
    let t = map.clamp(config.refine.t_eps, 1.0);
    recover(hazy, &[t.clone(), t.clone(), t], &airlight, config.refine.t_eps)
}
