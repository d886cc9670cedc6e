//! Blind motion deblurring.
//!
//! The crate estimates a blur kernel coarse to fine from a single blurry
//! image, alternating a PDE-sharpened latent prediction, a Fourier-domain
//! least-squares kernel solve and an adaptive shrinkage deconvolution. For
//! images whose blur differs between a salient foreground and the
//! background, a saliency mask drives a compensate-and-fuse flow so one
//! global deconvolution can be applied without seams.
//!
//! Start with [`pipeline::deblur_uniform`] for uniformly blurred images and
//! [`pipeline::deblur_spatially_variant`] when only part of the frame is
//! blurred. `examples/` has one runnable program per stage.

pub mod bench;
pub mod cli;
pub mod deconv;
pub mod error;
pub mod imaging;
pub mod kernel_est;
pub mod pipeline;
pub mod predict;
pub mod saliency;

pub use error::{DeblurError, Result};
pub use imaging::{BlurKernel, GradientField, PlanarImage};
