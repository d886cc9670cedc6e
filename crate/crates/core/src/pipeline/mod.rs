//! Coarse-to-fine uniform deblurring and the saliency-driven
//! spatially-variant flows built on it.

mod config;
mod trace;
mod uniform;
mod variant;

pub use config::DeblurConfig;
pub use trace::{edge_map_image, Diagnostics, TraceRow};
pub use uniform::{
    deblur_uniform, deblur_uniform_with, deconvolve_final, estimate_kernel_multiscale, ScaleState,
};
pub use variant::{
    deblur_multi_region, deblur_multi_region_with, deblur_spatially_variant,
    deblur_spatially_variant_with, saliency_mask, ForegroundMode, MultiRegionOutput, VariantOutput,
};
