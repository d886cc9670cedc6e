use crate::deconv::{deconv_energy, deconvolve, update_v, AlphaSchedule, DeconvParams};
use crate::error::{DeblurError, Result};
use crate::imaging::{
    build_pyramid, convolve, resize, rgb_to_gray, BlurKernel, ConvMode, EdgeMode, Padding,
    PlanarImage, PyramidLevel,
};
use crate::kernel_est::{
    center_kernel, denoise_kernel, estimate_kernel, kernel_energy, threshold_gradients,
    GradientPairs,
};
use crate::predict::{predict_latent, PredictParams};

use super::config::DeblurConfig;
use super::trace::{Diagnostics, TraceRow};

/// Working set of one pyramid level.
#[derive(Clone, Debug)]
pub struct ScaleState {
    pub level: usize,
    pub blurry: PlanarImage,
    pub kernel_size: usize,
    pub kernel: BlurKernel,
    pub latent: PlanarImage,
    pub lambda: f64,
    pub alpha: f64,
}

impl ScaleState {
    /// Coarsest level: the latent starts as the scaled blurry image and the
    /// kernel as a delta.
    fn coarsest(
        level: usize,
        blurry: PlanarImage,
        kernel_size: usize,
        config: &DeblurConfig,
    ) -> Self {
        Self {
            level,
            latent: blurry.clone(),
            blurry,
            kernel_size,
            kernel: BlurKernel::delta(kernel_size),
            lambda: config.lambda0,
            alpha: config.alpha0,
        }
    }

    /// Next finer level seeded from the previous estimates.
    fn refine(
        &self,
        level: usize,
        blurry: PlanarImage,
        kernel_size: usize,
        config: &DeblurConfig,
    ) -> Result<Self> {
        let latent = resize(&self.latent, blurry.width(), blurry.height())?;
        Ok(Self {
            level,
            latent,
            blurry,
            kernel_size,
            kernel: upscale_kernel(&self.kernel, kernel_size, config.kernel.denoise_divisor)?,
            lambda: config.lambda0,
            alpha: config.alpha0,
        })
    }

    /// One round of predict, threshold, kernel solve, kernel clean-up and
    /// intermediate deconvolution. `n` is the iteration index at this scale.
    fn iterate(
        &mut self,
        n: usize,
        config: &DeblurConfig,
        diag: Option<&mut Diagnostics>,
    ) -> Result<()> {
        self.lambda = config.lambda_at(n);
        let schedule = AlphaSchedule::at(config.alpha0, config.mu, n);
        self.alpha = schedule.alpha();
        let predict = PredictParams {
            lambda: self.lambda,
            ..config.predict.clone()
        };
        let prediction = predict_latent(&self.latent, &predict)?;
        let p = threshold_gradients(
            &prediction.latent,
            self.kernel_size,
            config.kernel.threshold_ratio,
        )?;
        let mut pairs =
            GradientPairs::new(&p, &self.blurry, config.kernel.weights, EdgeMode::Replicate)?;
        pairs.clear_border(self.kernel_size / 2 + 2);
        let raw = estimate_kernel(&pairs, &config.kernel, self.kernel_size)?;
        let kernel = center_kernel(&denoise_kernel(&raw, config.kernel.denoise_divisor)?);
        let inner = DeconvParams {
            inner_iterations: config.intermediate_inner_iterations,
            ..config.deconv.clone()
        };
        let latent = deconvolve(&self.blurry, &kernel, schedule, &inner)?;
        if let Some(diag) = diag {
            let v = update_v(&latent, self.alpha, inner.beta)?;
            diag.trace.push(TraceRow {
                scale: self.level,
                iter: n,
                lambda: self.lambda,
                alpha: self.alpha,
                fk_energy: kernel_energy(&pairs, &raw, config.kernel.theta),
                fk_energy_prev: kernel_energy(&pairs, &self.kernel, config.kernel.theta),
                fl_energy: deconv_energy(
                    &self.blurry,
                    &kernel,
                    &latent,
                    &v,
                    self.alpha,
                    inner.beta,
                    &inner.weights,
                )?,
            });
            diag.kernels.push(kernel.clone());
            if n + 1 == config.iterations_per_scale {
                diag.predictions.push(prediction.latent.clone());
                diag.edge_map = Some(prediction.edge_map.clone());
            }
        }
        self.kernel = kernel;
        self.latent = latent;
        Ok(())
    }
}

/// Bilinear kernel rescale followed by clean-up and normalization.
fn upscale_kernel(kernel: &BlurKernel, size: usize, divisor: f64) -> Result<BlurKernel> {
    if kernel.size() == size {
        return Ok(kernel.clone());
    }
    let img = PlanarImage::from_vec(kernel.size(), kernel.size(), 1, kernel.weights().to_vec())?;
    let up = resize(&img, size, size)?;
    let k = BlurKernel::new(size, up.data().iter().map(|v| v.max(0.0)).collect())?.normalized()?;
    denoise_kernel(&k, divisor)
}

/// Gaussian-prefiltered bilinear downsampling to a pyramid level.
fn downsample(image: &PlanarImage, level: &PyramidLevel) -> Result<PlanarImage> {
    if level.scale >= 1.0 {
        return Ok(image.clone());
    }
    let sigma = 0.5 * (level.scale.powi(-2) - 1.0).sqrt();
    let radius = (3.0 * sigma).ceil() as usize;
    let g = BlurKernel::from_fn(2 * radius + 1, |x, y| {
        let (dx, dy) = (x as f64 - radius as f64, y as f64 - radius as f64);
        (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
    })?
    .normalized()?;
    let smooth = convolve(image, &g, ConvMode::Fft, Padding::Replicate)?;
    resize(&smooth, level.width, level.height)
}

/// Affine map of the intensities onto `[0, 1]`. A unit-sum blur commutes
/// with it, so the kernel is unchanged while the fixed filter parameters
/// see a full-range image.
fn stretch(image: &PlanarImage) -> PlanarImage {
    let (lo, hi) = (image.min(), image.max());
    if hi - lo < 1e-6 {
        return image.clone();
    }
    image.map(|v| (v - lo) / (hi - lo))
}

fn check_size(image: &PlanarImage, kernel_size: usize) -> Result<()> {
    if image.width() < 3 * kernel_size || image.height() < 3 * kernel_size {
        return Err(DeblurError::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            kernel_size,
        });
    }
    Ok(())
}

/// Coarse-to-fine kernel estimation on the gray version of `blurry`.
/// Returns the final kernel and the last intermediate latent estimate.
pub fn estimate_kernel_multiscale(
    blurry: &PlanarImage,
    config: &DeblurConfig,
    mut diag: Option<&mut Diagnostics>,
) -> Result<(BlurKernel, PlanarImage)> {
    config.validate()?;
    check_size(blurry, config.kernel_size)?;
    let gray = stretch(&rgb_to_gray(blurry)?);
    let levels = build_pyramid(
        gray.width(),
        gray.height(),
        config.kernel_size,
        config.min_kernel,
        config.pyramid_factor,
    )?;
    let mut state: Option<ScaleState> = None;
    for (i, level) in levels.iter().enumerate() {
        let b = downsample(&gray, level)?;
        let mut s = match &state {
            None => ScaleState::coarsest(i, b, level.kernel_size, config),
            Some(prev) => prev.refine(i, b, level.kernel_size, config)?,
        };
        for n in 0..config.iterations_per_scale {
            s.iterate(n, config, diag.as_deref_mut())?;
        }
        state = Some(s);
    }
    let s = state.expect("pyramid has at least one level");
    Ok((s.kernel, s.latent))
}

/// Final non-blind deconvolution with the full schedule.
pub fn deconvolve_final(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    config: &DeblurConfig,
) -> Result<PlanarImage> {
    deconvolve(blurry, kernel, config.alpha_schedule(), &config.deconv)
}

/// Blind uniform deblurring: multiscale kernel estimation followed by the
/// final deconvolution of every channel.
pub fn deblur_uniform(
    blurry: &PlanarImage,
    config: &DeblurConfig,
) -> Result<(PlanarImage, BlurKernel)> {
    deblur_uniform_with(blurry, config, None)
}

/// [`deblur_uniform`] that also records per-iteration diagnostics.
pub fn deblur_uniform_with(
    blurry: &PlanarImage,
    config: &DeblurConfig,
    diag: Option<&mut Diagnostics>,
) -> Result<(PlanarImage, BlurKernel)> {
    let (kernel, _) = estimate_kernel_multiscale(blurry, config, diag)?;
    let kernel = center_kernel(&kernel);
    let out = deconvolve_final(blurry, &kernel, config)?;
    Ok((out, kernel))
}
