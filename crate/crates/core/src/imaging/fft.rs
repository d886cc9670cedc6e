//! Two-dimensional FFT helpers and boundary padding used by every
//! Fourier-domain solver in the crate.
//!
//! All spectra here follow circular semantics on a `width x height` grid. A
//! small stencil is placed on the grid with its zero-shift cell at index
//! `(0, 0)`, so multiplying spectra implements true (flipped) convolution.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::image::PlanarImage;
use super::kernel::BlurKernel;

/// Forward/inverse plans for one grid size.
pub struct Fft2 {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(width: usize, height: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward_real(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_fwd, &self.col_fwd);
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.row_inv, &self.col_inv);
        let scale = 1.0 / self.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// Inverse transform returning the real part and the largest discarded
    /// imaginary magnitude.
    pub fn inverse_real(&self, mut buf: Vec<Complex64>) -> (Vec<f64>, f64) {
        self.inverse(&mut buf);
        let imag = buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        (buf.into_iter().map(|c| c.re).collect(), imag)
    }

    fn transform(&self, buf: &mut [Complex64], row: &Arc<dyn Fft<f64>>, col: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.len());
        let (w, h) = (self.width, self.height);
        row.process(buf);
        let mut column = vec![Complex64::new(0.0, 0.0); h];
        for x in 0..w {
            for y in 0..h {
                column[y] = buf[y * w + x];
            }
            col.process(&mut column);
            for y in 0..h {
                buf[y * w + x] = column[y];
            }
        }
    }

    /// Spectrum of a sparse stencil given as `(dx, dy, weight)` taps.
    pub fn stencil_spectrum(&self, taps: &[(isize, isize, f64)]) -> Vec<Complex64> {
        let mut grid = vec![0.0; self.len()];
        for &(dx, dy, w) in taps {
            let x = dx.rem_euclid(self.width as isize) as usize;
            let y = dy.rem_euclid(self.height as isize) as usize;
            grid[y * self.width + x] += w;
        }
        self.forward_real(&grid)
    }

    /// Spectrum of a kernel embedded with its center at the origin.
    pub fn kernel_spectrum(&self, kernel: &BlurKernel) -> Vec<Complex64> {
        let r = kernel.radius() as isize;
        let mut taps = Vec::with_capacity(kernel.size() * kernel.size());
        for y in 0..kernel.size() {
            for x in 0..kernel.size() {
                let w = kernel.get(x, y);
                if w != 0.0 {
                    taps.push((x as isize - r, y as isize - r, w));
                }
            }
        }
        self.stencil_spectrum(&taps)
    }
}

/// Smallest `n >= target` whose only prime factors are 2, 3 and 5.
pub fn next_smooth(target: usize) -> usize {
    let mut n = target.max(1);
    loop {
        let mut m = n;
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 1;
    }
}

/// How samples outside the image are synthesized before a transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    /// Nearest edge sample.
    Replicate,
    /// Replicated edges blended across the wrap-around gap with a raised
    /// cosine, so the periodic extension has no jump.
    Taper,
}

/// Placement of an image inside a padded transform grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadLayout {
    pub width: usize,
    pub height: usize,
    pub left: usize,
    pub top: usize,
}

impl PadLayout {
    /// At least `margin` extra samples on each side, rounded up to an
    /// FFT-friendly size.
    pub fn new(width: usize, height: usize, margin: usize) -> Self {
        let pw = next_smooth(width + 2 * margin);
        let ph = next_smooth(height + 2 * margin);
        Self {
            width: pw,
            height: ph,
            left: (pw - width) / 2,
            top: (ph - height) / 2,
        }
    }
}

fn pad_line(src: &[f64], out: &mut [f64], left: usize, padding: Padding) {
    let n = src.len();
    let total = out.len();
    let gap = total - n;
    for (p, o) in out.iter_mut().enumerate() {
        let x = p as isize - left as isize;
        *o = if x >= 0 && (x as usize) < n {
            src[x as usize]
        } else {
            match padding {
                Padding::Replicate => {
                    if x < 0 {
                        src[0]
                    } else {
                        src[n - 1]
                    }
                }
                Padding::Taper => {
                    // position 1..=gap walking from the last sample around to the first
                    let t = (x - (n as isize - 1)).rem_euclid(total as isize) as f64;
                    let w = 0.5 * (1.0 + (std::f64::consts::PI * t / (gap as f64 + 1.0)).cos());
                    w * src[n - 1] + (1.0 - w) * src[0]
                }
            }
        };
    }
}

/// Pads a single plane into `layout` (rows first, then columns).
pub fn pad_plane(
    plane: &[f64],
    width: usize,
    height: usize,
    layout: PadLayout,
    padding: Padding,
) -> Vec<f64> {
    let (pw, ph) = (layout.width, layout.height);
    let mut rows = vec![0.0; pw * height];
    for y in 0..height {
        pad_line(
            &plane[y * width..(y + 1) * width],
            &mut rows[y * pw..(y + 1) * pw],
            layout.left,
            padding,
        );
    }
    let mut out = vec![0.0; pw * ph];
    let mut col = vec![0.0; height];
    let mut col_out = vec![0.0; ph];
    for x in 0..pw {
        for y in 0..height {
            col[y] = rows[y * pw + x];
        }
        pad_line(&col, &mut col_out, layout.top, padding);
        for y in 0..ph {
            out[y * pw + x] = col_out[y];
        }
    }
    out
}

/// Inverse of [`pad_plane`]: extracts the original window.
pub fn crop_plane(padded: &[f64], layout: PadLayout, width: usize, height: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        let s = (y + layout.top) * layout.width + layout.left;
        out.extend_from_slice(&padded[s..s + width]);
    }
    out
}

/// Pads a single-channel image.
pub fn pad_image(image: &PlanarImage, layout: PadLayout, padding: Padding) -> PlanarImage {
    let data = pad_plane(
        image.plane(0),
        image.width(),
        image.height(),
        layout,
        padding,
    );
    PlanarImage::from_vec(layout.width, layout.height, 1, data).expect("padded size")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_sizes() {
        assert_eq!(next_smooth(7), 8);
        assert_eq!(next_smooth(11), 12);
        assert_eq!(next_smooth(97), 100);
        assert_eq!(next_smooth(1), 1);
    }

    #[test]
    fn forward_inverse_round_trip() {
        let fft = Fft2::new(6, 5);
        let data: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
        let spec = fft.forward_real(&data);
        let (back, imag) = fft.inverse_real(spec);
        assert!(imag < 1e-12);
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn taper_padding_is_continuous_across_the_wrap() {
        let src = [0.2, 0.4, 0.9];
        let mut out = vec![0.0; 12];
        pad_line(&src, &mut out, 4, Padding::Taper);
        assert_eq!(&out[4..7], &src);
        // neighbors across the periodic seam differ by far less than the edge jump
        let max_step = (0..12)
            .map(|i| (out[(i + 1) % 12] - out[i]).abs())
            .fold(0.0, f64::max);
        assert!(max_step <= 0.5 + 1e-12, "{out:?}");
        assert!((out[3] - 0.2).abs() < 0.1 && (out[7] - 0.9).abs() < 0.1);
    }

    #[test]
    fn crop_inverts_pad() {
        let img: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let layout = PadLayout::new(5, 4, 3);
        for padding in [Padding::Replicate, Padding::Taper] {
            let p = pad_plane(&img, 5, 4, layout, padding);
            assert_eq!(crop_plane(&p, layout, 5, 4), img);
        }
    }
}
