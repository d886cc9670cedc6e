//! Blur-kernel estimation from a predicted latent image and the blurry
//! input, plus kernel clean-up.

mod denoise;
mod solve;
mod threshold;

pub use denoise::{align_kernel, center_kernel, denoise_kernel};
pub use solve::{
    estimate_kernel, kernel_energy, solve_kernel_raw, GradientPairs, KernelEstParams, PAIR_WEIGHTS,
};
pub use threshold::{
    apply_thresholds, direction_bin, direction_thresholds, threshold_gradients, DIRECTION_BINS,
};
