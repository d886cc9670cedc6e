//! Saliency detection, mask construction, background-rectangle extraction
//! and the compensate-fusion arithmetic.

mod detect;
mod fusion;
mod mask;

pub use detect::{binomial_blur, saliency_map, saliency_map_lab, FLAT_SALIENCY};
pub use fusion::{
    fuse_compensate, fuse_final, multi_region_plan, separate, MultiRegionPlan, RegionPlan,
};
pub use mask::{binarize_and_dilate, largest_background_rectangle, BinaryMask, Rect};
