//! Pixelwise mask arithmetic of the compensate-and-fuse scheme.
//!
//! Masks are binary, so every blend is a per-pixel selection: wherever a
//! blend picks the original image the output is bit-identical to it.

use super::mask::BinaryMask;
use crate::error::{DeblurError, Result};
use crate::imaging::{convolve, BlurKernel, ConvMode, Padding, PlanarImage};

/// `mask ? a : b` per pixel and channel.
fn select(mask: &BinaryMask, a: &PlanarImage, b: &PlanarImage) -> Result<PlanarImage> {
    a.ensure_same_shape(b)?;
    mask.ensure_matches(a)?;
    let mut out = b.clone();
    let n = a.area();
    for c in 0..a.channels() {
        let (src, dst) = (a.plane(c), out.plane_mut(c));
        for i in 0..n {
            if mask.bits()[i] {
                dst[i] = src[i];
            }
        }
    }
    Ok(out)
}

fn blur(image: &PlanarImage, kernel: &BlurKernel) -> Result<PlanarImage> {
    convolve(image, kernel, ConvMode::Fft, Padding::Replicate)
}

/// Splits an image into its salient part (`mask · image`) and background
/// part (`(1 − mask) · image`).
pub fn separate(image: &PlanarImage, mask: &BinaryMask) -> Result<(PlanarImage, PlanarImage)> {
    mask.ensure_matches(image)?;
    let zero = PlanarImage::new(image.width(), image.height(), image.channels());
    Ok((select(mask, image, &zero)?, select(mask, &zero, image)?))
}

/// Blurs the masked part with `kernel` and keeps the rest, so the whole
/// frame carries one uniform blur: `mask · (K ⊗ image) + (1 − mask) · image`.
pub fn fuse_compensate(
    image: &PlanarImage,
    mask: &BinaryMask,
    kernel: &BlurKernel,
) -> Result<PlanarImage> {
    mask.ensure_matches(image)?;
    select(mask, &blur(image, kernel)?, image)
}

/// Restores the untouched part: `mask · original + (1 − mask) · deblurred`.
pub fn fuse_final(
    original: &PlanarImage,
    deblurred: &PlanarImage,
    mask: &BinaryMask,
) -> Result<PlanarImage> {
    select(mask, original, deblurred)
}

/// One blurred region of a multi-region image.
#[derive(Clone, Debug)]
pub struct RegionPlan {
    pub mask: BinaryMask,
    /// `mask · image`.
    pub region_image: PlanarImage,
}

/// Per-region fusion recipes for an image with several independently
/// blurred regions on a sharp background.
#[derive(Clone, Debug)]
pub struct MultiRegionPlan {
    original: PlanarImage,
    regions: Vec<RegionPlan>,
    background: PlanarImage,
}

impl MultiRegionPlan {
    pub fn regions(&self) -> &[RegionPlan] {
        &self.regions
    }

    /// `(1 − Σ mask_i) · image`.
    pub fn background(&self) -> &PlanarImage {
        &self.background
    }

    pub fn original(&self) -> &PlanarImage {
        &self.original
    }

    /// Region `i` kept as is, everything else blurred by its kernel:
    /// `(1 − mask_i) · (K_i ⊗ image) + mask_i · image`.
    pub fn fused_image(&self, i: usize, kernel: &BlurKernel) -> Result<PlanarImage> {
        let region = self
            .regions
            .get(i)
            .ok_or_else(|| DeblurError::Parameter(format!("no region {i}")))?;
        select(&region.mask, &self.original, &blur(&self.original, kernel)?)
    }

    /// `Σ mask_i · deblurred_i + (1 − Σ mask_i) · image`.
    pub fn compose(&self, deblurred: &[PlanarImage]) -> Result<PlanarImage> {
        if deblurred.len() != self.regions.len() {
            return Err(DeblurError::Parameter(format!(
                "{} deblurred images for {} regions",
                deblurred.len(),
                self.regions.len()
            )));
        }
        let mut out = self.original.clone();
        for (region, img) in self.regions.iter().zip(deblurred) {
            out = select(&region.mask, img, &out)?;
        }
        Ok(out)
    }
}

/// Validates that the masks are pairwise disjoint and builds the plan.
pub fn multi_region_plan(image: &PlanarImage, masks: &[BinaryMask]) -> Result<MultiRegionPlan> {
    for m in masks {
        m.ensure_matches(image)?;
    }
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if masks[i].intersects(&masks[j]) {
                return Err(DeblurError::MaskOverlap {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let mut union = BinaryMask::new(image.width(), image.height());
    let mut regions = Vec::with_capacity(masks.len());
    for m in masks {
        union = union.union(m)?;
        let (region_image, _) = separate(image, m)?;
        regions.push(RegionPlan {
            mask: m.clone(),
            region_image,
        });
    }
    let (_, background) = separate(image, &union)?;
    Ok(MultiRegionPlan {
        original: image.clone(),
        regions,
        background,
    })
}
