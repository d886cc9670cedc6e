use rustfft::num_complex::Complex64;

use crate::error::{DeblurError, Result};
use crate::imaging::{
    derivative_with, fft::Fft2, fft_circular, BlurKernel, Derivative, EdgeMode, GradientField,
    PlanarImage,
};

/// Default weights of the five gradient pairs.
pub const PAIR_WEIGHTS: [f64; 5] = [25.0, 25.0, 12.5, 12.5, 12.5];

/// Parameters of the kernel solve and kernel clean-up.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelEstParams {
    /// Tikhonov weight of the kernel energy.
    pub theta: f64,
    /// Regularizer added to the Fourier-domain denominator.
    pub gamma: f64,
    /// Components smaller than `kernel area / denoise_divisor` are dropped.
    pub denoise_divisor: f64,
    /// Gradient selection ratio `r`.
    pub threshold_ratio: f64,
    pub weights: [f64; 5],
}

impl Default for KernelEstParams {
    fn default() -> Self {
        Self {
            theta: 5.0,
            gamma: 5.0,
            denoise_divisor: 160.0,
            threshold_ratio: 0.2,
            weights: PAIR_WEIGHTS,
        }
    }
}

impl KernelEstParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.gamma > 0.0) {
            return Err(DeblurError::Parameter(
                "theta and gamma must be positive".into(),
            ));
        }
        if !(128.0..=256.0).contains(&self.denoise_divisor) {
            return Err(DeblurError::Parameter(format!(
                "denoise divisor must lie in [128, 256], got {}",
                self.denoise_divisor
            )));
        }
        Ok(())
    }
}

/// The five `(predicted-gradient, blurry-derivative)` pairs of the kernel
/// energy, all on one grid:
/// `(Px, ∂x B)`, `(Py, ∂y B)`, `(∂x Px, ∂xx B)`, `(∂y Py, ∂yy B)` and
/// `((∂x Py + ∂y Px)/2, ∂xy B)`.
#[derive(Clone, Debug)]
pub struct GradientPairs {
    pub pairs: Vec<(PlanarImage, PlanarImage)>,
    pub weights: [f64; 5],
}

impl GradientPairs {
    pub fn new(
        p: &GradientField,
        blurry: &PlanarImage,
        weights: [f64; 5],
        edge: EdgeMode,
    ) -> Result<Self> {
        blurry.ensure_gray()?;
        p.dx.ensure_same_shape(blurry)?;
        let d = |img: &PlanarImage, which| derivative_with(img, which, edge);
        let dxpy = d(&p.dy, Derivative::Dx)?;
        let dypx = d(&p.dx, Derivative::Dy)?;
        let mixed = dxpy.zip_map(&dypx, |a, b| 0.5 * (a + b))?;
        let pairs = vec![
            (p.dx.clone(), d(blurry, Derivative::Dx)?),
            (p.dy.clone(), d(blurry, Derivative::Dy)?),
            (d(&p.dx, Derivative::Dx)?, d(blurry, Derivative::Dxx)?),
            (d(&p.dy, Derivative::Dy)?, d(blurry, Derivative::Dyy)?),
            (mixed, d(blurry, Derivative::Dxy)?),
        ];
        Ok(Self { pairs, weights })
    }

    pub fn width(&self) -> usize {
        self.pairs[0].0.width()
    }

    pub fn height(&self) -> usize {
        self.pairs[0].0.height()
    }

    /// Zeroes every grid within `band` pixels of the border, dropping rows
    /// and columns whose derivatives saw the boundary extension.
    pub fn clear_border(&mut self, band: usize) {
        let (w, h) = (self.width(), self.height());
        for (p, b) in &mut self.pairs {
            for img in [p, b] {
                let data = img.data_mut();
                for y in 0..h {
                    for x in 0..w {
                        if x < band || y < band || x + band >= w || y + band >= h {
                            data[y * w + x] = 0.0;
                        }
                    }
                }
            }
        }
    }

    fn has_structure(&self) -> bool {
        self.pairs
            .iter()
            .any(|(p, _)| p.data().iter().any(|&v| v != 0.0))
    }
}

/// Unconstrained Fourier-domain minimizer of the kernel energy, cropped to
/// `kernel_size` around the zero shift. Weights may be negative and do not
/// sum to one.
pub fn solve_kernel_raw(
    pairs: &GradientPairs,
    gamma: f64,
    kernel_size: usize,
) -> Result<BlurKernel> {
    let (w, h) = (pairs.width(), pairs.height());
    if kernel_size > w.min(h) {
        return Err(DeblurError::ImageTooSmall {
            width: w,
            height: h,
            kernel_size,
        });
    }
    if !pairs.has_structure() {
        return Err(DeblurError::NoStructure);
    }
    let fft = Fft2::new(w, h);
    let zero = Complex64::new(0.0, 0.0);
    let mut num = vec![zero; w * h];
    let mut den = vec![Complex64::new(gamma, 0.0); w * h];
    for ((p, b), &wt) in pairs.pairs.iter().zip(&pairs.weights) {
        let fp = fft.forward_real(p.data());
        let fb = fft.forward_real(b.data());
        for i in 0..w * h {
            num[i] += wt * fp[i].conj() * fb[i];
            den[i] += wt * fp[i].norm_sqr();
        }
    }
    for (n, d) in num.iter_mut().zip(&den) {
        *n /= d;
    }
    let (full, _) = fft.inverse_real(num);
    let r = (kernel_size / 2) as isize;
    BlurKernel::from_fn(kernel_size, |i, j| {
        let x = (i as isize - r).rem_euclid(w as isize) as usize;
        let y = (j as isize - r).rem_euclid(h as isize) as usize;
        full[y * w + x]
    })
}

/// Kernel minimizing the gradient-domain energy, with negative weights
/// clamped to zero and the result normalized.
pub fn estimate_kernel(
    pairs: &GradientPairs,
    params: &KernelEstParams,
    kernel_size: usize,
) -> Result<BlurKernel> {
    let mut k = solve_kernel_raw(pairs, params.gamma, kernel_size)?;
    for v in k.weights_mut() {
        *v = v.max(0.0);
    }
    k.normalize().map_err(|_| DeblurError::NoStructure)?;
    Ok(k)
}

/// `Σ w · ||K ⊗ P − ∂B||² + θ ||K||²` under circular boundary.
pub fn kernel_energy(pairs: &GradientPairs, kernel: &BlurKernel, theta: f64) -> f64 {
    let fft = Fft2::new(pairs.width(), pairs.height());
    let spec = fft.kernel_spectrum(kernel);
    let mut e = 0.0;
    for ((p, b), &wt) in pairs.pairs.iter().zip(&pairs.weights) {
        let kp = fft_circular(&fft, p.data(), &spec);
        e += wt
            * kp.iter()
                .zip(b.data())
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>();
    }
    e + theta * kernel.weights().iter().map(|v| v * v).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_pairs_have_no_structure() {
        let g = GradientField::zeros(16, 16);
        let b = PlanarImage::filled(16, 16, 1, 0.5);
        let pairs = GradientPairs::new(&g, &b, PAIR_WEIGHTS, EdgeMode::Periodic).unwrap();
        assert!(matches!(
            estimate_kernel(&pairs, &KernelEstParams::default(), 5),
            Err(DeblurError::NoStructure)
        ));
    }

    #[test]
    fn params_validation() {
        assert!(KernelEstParams::default().validate().is_ok());
        let bad = KernelEstParams {
            denoise_divisor: 100.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
