//! Image containers, color conversion, derivatives, convolution, pyramids
//! and file I/O.

mod color;
mod convolve;
mod derivative;
pub mod fft;
mod image;
pub mod io;
mod kernel;
mod pyramid;
mod resize;

pub use color::{gray_to_rgb, rgb_to_gray, rgb_to_lab, srgb_pixel_to_lab};
pub(crate) use convolve::fft_circular;
pub use convolve::{convolve, convolve_circular, ConvMode};
pub use derivative::{derivative, derivative_with, Derivative, EdgeMode};
pub use fft::Padding;
pub use image::{GradientField, PlanarImage};
pub use io::{load, save};
pub use kernel::BlurKernel;
pub use pyramid::{build_pyramid, round_to_odd, PyramidLevel};
pub use resize::resize;
