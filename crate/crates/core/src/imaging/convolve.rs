use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::fft::{crop_plane, pad_plane, Fft2, PadLayout, Padding};
use super::image::PlanarImage;
use super::kernel::BlurKernel;
use crate::error::{DeblurError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvMode {
    /// Direct double sum.
    Spatial,
    /// Pointwise product of spectra on a padded grid.
    Fft,
}

/// Convolves every channel with `kernel` (true convolution, kernel flipped).
///
/// The image is padded by the kernel radius using `boundary` and cropped
/// back, so both modes see the same out-of-image samples. A unit impulse
/// (of any size) returns the input unchanged.
pub fn convolve(
    image: &PlanarImage,
    kernel: &BlurKernel,
    mode: ConvMode,
    boundary: Padding,
) -> Result<PlanarImage> {
    let (w, h) = (image.width(), image.height());
    if kernel.size() > w.min(h) {
        return Err(DeblurError::Dimension(format!(
            "{0}x{0} kernel exceeds {w}x{h} image",
            kernel.size()
        )));
    }
    if is_unit_impulse(kernel) {
        return Ok(image.clone());
    }
    let layout = PadLayout::new(w, h, kernel.radius());
    let fft = match mode {
        ConvMode::Fft => Some((Fft2::new(layout.width, layout.height), layout)),
        ConvMode::Spatial => None,
    };
    let planes: Vec<Vec<f64>> = (0..image.channels())
        .into_par_iter()
        .map(|c| {
            let padded = pad_plane(image.plane(c), w, h, layout, boundary);
            match &fft {
                None => spatial_valid(&padded, layout, w, h, kernel),
                Some((fft, layout)) => {
                    let out = fft_circular(fft, &padded, &fft.kernel_spectrum(kernel));
                    crop_plane(&out, *layout, w, h)
                }
            }
        })
        .collect();
    let mut out = PlanarImage::new(w, h, image.channels());
    for (c, p) in planes.into_iter().enumerate() {
        out.plane_mut(c).copy_from_slice(&p);
    }
    Ok(out)
}

fn is_unit_impulse(kernel: &BlurKernel) -> bool {
    let center = kernel.size() * kernel.size() / 2;
    kernel
        .weights()
        .iter()
        .enumerate()
        .all(|(i, &w)| if i == center { w == 1.0 } else { w == 0.0 })
}

fn spatial_valid(
    padded: &[f64],
    layout: PadLayout,
    w: usize,
    h: usize,
    kernel: &BlurKernel,
) -> Vec<f64> {
    let r = kernel.radius() as isize;
    let ks = kernel.size();
    let pw = layout.width;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, o) in row.iter_mut().enumerate() {
            let px = (x + layout.left) as isize;
            let py = (y + layout.top) as isize;
            let mut acc = 0.0;
            for ky in 0..ks {
                let sy = (py - (ky as isize - r)) as usize;
                for kx in 0..ks {
                    let sx = (px - (kx as isize - r)) as usize;
                    acc += kernel.get(kx, ky) * padded[sy * pw + sx];
                }
            }
            *o = acc;
        }
    });
    out
}

/// Circular convolution of a real grid with a precomputed spectrum.
pub(crate) fn fft_circular(fft: &Fft2, data: &[f64], spectrum: &[Complex64]) -> Vec<f64> {
    let mut buf = fft.forward_real(data);
    for (b, s) in buf.iter_mut().zip(spectrum) {
        *b *= s;
    }
    fft.inverse_real(buf).0
}

/// Circular convolution of a single-channel image; used where the solvers
/// assume periodic semantics.
pub fn convolve_circular(image: &PlanarImage, kernel: &BlurKernel) -> Result<PlanarImage> {
    image.ensure_gray()?;
    let fft = Fft2::new(image.width(), image.height());
    let out = fft_circular(&fft, image.plane(0), &fft.kernel_spectrum(kernel));
    PlanarImage::from_vec(image.width(), image.height(), 1, out)
}
