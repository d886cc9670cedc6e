use std::fmt;
use std::str::FromStr;

use crate::error::{DeblurError, Result};
use crate::imaging::{BlurKernel, PlanarImage};
use crate::kernel_est::center_kernel;
use crate::saliency::{
    binarize_and_dilate, fuse_compensate, fuse_final, largest_background_rectangle,
    multi_region_plan, saliency_map, BinaryMask, Rect,
};

use super::config::DeblurConfig;
use super::trace::Diagnostics;
use super::uniform::{deconvolve_final, estimate_kernel_multiscale};

/// Which side of the saliency mask carries the blur.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ForegroundMode {
    /// Salient region sharp, background blurred.
    #[default]
    SharpForeground,
    /// Salient region blurred, background sharp.
    BlurryForeground,
}

impl FromStr for ForegroundMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sharp-fg" => Ok(Self::SharpForeground),
            "blurry-fg" => Ok(Self::BlurryForeground),
            other => Err(format!(
                "unknown mode `{other}`, expected sharp-fg or blurry-fg"
            )),
        }
    }
}

impl fmt::Display for ForegroundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SharpForeground => "sharp-fg",
            Self::BlurryForeground => "blurry-fg",
        })
    }
}

/// Result of [`deblur_spatially_variant_with`].
#[derive(Clone, Debug)]
pub struct VariantOutput {
    pub image: PlanarImage,
    pub kernel: BlurKernel,
    /// Salient-region mask (computed or injected).
    pub mask: BinaryMask,
    /// Crop the kernel was estimated on.
    pub rect: Rect,
}

/// Result of [`deblur_multi_region_with`].
#[derive(Clone, Debug)]
pub struct MultiRegionOutput {
    pub image: PlanarImage,
    pub kernels: Vec<BlurKernel>,
    pub rects: Vec<Rect>,
}

/// Frequency-tuned saliency, thresholded at `threshold_scale × mean` and
/// dilated.
pub fn saliency_mask(image: &PlanarImage, config: &DeblurConfig) -> Result<BinaryMask> {
    binarize_and_dilate(
        &saliency_map(image)?,
        config.threshold_scale,
        config.dilate_radius(),
    )
}

/// Kernel of the region outside `sharp`, estimated on the largest
/// rectangle that avoids `sharp`.
fn region_kernel(
    image: &PlanarImage,
    sharp: &BinaryMask,
    config: &DeblurConfig,
    diag: Option<&mut Diagnostics>,
) -> Result<(BlurKernel, Rect)> {
    let rect = largest_background_rectangle(sharp, config.min_side())?;
    let crop = rect.crop(image)?;
    let (kernel, _) = estimate_kernel_multiscale(&crop, config, diag)?;
    Ok((center_kernel(&kernel), rect))
}

/// Compensate-fuse with `sharp` kept, deconvolve the whole frame, then
/// restore the original pixels under `sharp`.
fn restore_outside(
    image: &PlanarImage,
    sharp: &BinaryMask,
    kernel: &BlurKernel,
    config: &DeblurConfig,
) -> Result<PlanarImage> {
    let fused = fuse_compensate(image, sharp, kernel)?;
    let deblurred = deconvolve_final(&fused, kernel, config)?;
    fuse_final(image, &deblurred, sharp)
}

/// Deblurs an image whose blur is confined to one side of its saliency
/// mask. Returns the result, the estimated kernel and the mask.
pub fn deblur_spatially_variant(
    image: &PlanarImage,
    config: &DeblurConfig,
    mode: ForegroundMode,
) -> Result<(PlanarImage, BlurKernel, BinaryMask)> {
    let out = deblur_spatially_variant_with(image, config, mode, None, None)?;
    Ok((out.image, out.kernel, out.mask))
}

/// [`deblur_spatially_variant`] with an optional user mask replacing the
/// saliency segmentation and optional diagnostics.
pub fn deblur_spatially_variant_with(
    image: &PlanarImage,
    config: &DeblurConfig,
    mode: ForegroundMode,
    mask: Option<&BinaryMask>,
    diag: Option<&mut Diagnostics>,
) -> Result<VariantOutput> {
    config.validate()?;
    let mask = match mask {
        Some(m) => {
            m.ensure_matches(image)?;
            m.clone()
        }
        None => {
            image.ensure_channels(3)?;
            saliency_mask(image, config)?
        }
    };
    if mask.is_empty() || mask.is_full() {
        return Err(DeblurError::DegenerateSegmentation(format!(
            "mask covers {} of {} pixels",
            mask.count_ones(),
            image.area()
        )));
    }
    let sharp = match mode {
        ForegroundMode::SharpForeground => mask.clone(),
        ForegroundMode::BlurryForeground => mask.complement(),
    };
    let (kernel, rect) = region_kernel(image, &sharp, config, diag)?;
    let image = restore_outside(image, &sharp, &kernel, config)?;
    Ok(VariantOutput {
        image,
        kernel,
        mask,
        rect,
    })
}

/// Deblurs several disjoint regions, each with its own kernel, over a
/// sharp background that is returned untouched.
pub fn deblur_multi_region(
    image: &PlanarImage,
    masks: &[BinaryMask],
    config: &DeblurConfig,
) -> Result<PlanarImage> {
    Ok(deblur_multi_region_with(image, masks, config)?.image)
}

/// [`deblur_multi_region`] that also returns the per-region kernels and
/// estimation rectangles.
pub fn deblur_multi_region_with(
    image: &PlanarImage,
    masks: &[BinaryMask],
    config: &DeblurConfig,
) -> Result<MultiRegionOutput> {
    config.validate()?;
    let plan = multi_region_plan(image, masks)?;
    let (mut kernels, mut rects, mut deblurred) = (Vec::new(), Vec::new(), Vec::new());
    for (i, region) in plan.regions().iter().enumerate() {
        let (kernel, rect) = region_kernel(image, &region.mask.complement(), config, None)?;
        let fused = plan.fused_image(i, &kernel)?;
        deblurred.push(deconvolve_final(&fused, &kernel, config)?);
        kernels.push(kernel);
        rects.push(rect);
    }
    Ok(MultiRegionOutput {
        image: plan.compose(&deblurred)?,
        kernels,
        rects,
    })
}
