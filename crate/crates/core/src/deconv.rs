//! Non-blind deconvolution by alternating minimization of
//!
//! ```text
//! f(L) = Σ ω · ||K ⊗ ∂L − ∂B||² + α ||∇L − v||² + β Σ |v|
//! ```
//!
//! over the six derivative operators `∂ ∈ {1, ∂x, ∂y, ∂xx, ∂yy, ∂xy}`. The
//! `v` step is a per-pixel shrinkage and the `L` step a closed-form
//! Fourier-domain solve. `α` decays geometrically across the alternations.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{DeblurError, Result};
use crate::imaging::fft::{crop_plane, pad_plane, Fft2, PadLayout, Padding};
use crate::imaging::{
    convolve_circular, derivative_with, BlurKernel, Derivative, EdgeMode, GradientField,
    PlanarImage,
};

/// Default `ω` for `[1, ∂x, ∂y, ∂xx, ∂yy, ∂xy]`.
pub const DERIVATIVE_WEIGHTS: [f64; 6] = [50.0, 25.0, 25.0, 12.5, 12.5, 12.5];

/// Denominator floor of the Fourier solve.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Boundary model of the Fourier solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FftBoundary {
    /// The image is treated as periodic.
    Circular,
    /// The image is padded by the kernel width with a smooth periodic
    /// blend and cropped after the solve.
    Taper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeconvParams {
    /// Sparsity weight on `v`.
    pub beta: f64,
    pub weights: [f64; 6],
    pub inner_iterations: usize,
    pub boundary: FftBoundary,
}

impl Default for DeconvParams {
    fn default() -> Self {
        Self {
            beta: 1.0,
            weights: DERIVATIVE_WEIGHTS,
            inner_iterations: 3,
            boundary: FftBoundary::Taper,
        }
    }
}

/// Geometric decay `α_n = α₀ · μⁿ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaSchedule {
    pub alpha0: f64,
    pub mu: f64,
    pub index: usize,
}

impl Default for AlphaSchedule {
    fn default() -> Self {
        Self::new(0.2, 0.9)
    }
}

impl AlphaSchedule {
    pub fn new(alpha0: f64, mu: f64) -> Self {
        Self {
            alpha0,
            mu,
            index: 0,
        }
    }

    pub fn at(alpha0: f64, mu: f64, index: usize) -> Self {
        Self { alpha0, mu, index }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha0 * self.mu.powi(self.index as i32)
    }

    pub fn advance(&mut self) {
        self.index += 1;
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0 && self.mu > 0.0 && self.mu < 1.0) {
            return Err(DeblurError::Parameter(format!(
                "alpha schedule needs alpha0 > 0 and 0 < mu < 1, got {} and {}",
                self.alpha0, self.mu
            )));
        }
        Ok(())
    }
}

/// Soft-threshold of one gradient vector:
/// `g / |g| · max(|g| − β / (2α), 0)`.
pub fn shrink_gradient(g: [f64; 2], alpha: f64, beta: f64) -> [f64; 2] {
    let m = g[0].hypot(g[1]);
    if m == 0.0 {
        return [0.0, 0.0];
    }
    let s = (m - beta / (2.0 * alpha)).max(0.0) / m;
    [g[0] * s, g[1] * s]
}

/// Per-pixel shrinkage of `∇L` (periodic forward differences).
pub fn update_v(latent: &PlanarImage, alpha: f64, beta: f64) -> Result<GradientField> {
    latent.ensure_gray()?;
    if !(alpha > 0.0) {
        return Err(DeblurError::Parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let mut v = GradientField::new(
        derivative_with(latent, Derivative::Dx, EdgeMode::Periodic)?,
        derivative_with(latent, Derivative::Dy, EdgeMode::Periodic)?,
    )?;
    let (dx, dy) = (v.dx.data_mut(), v.dy.data_mut());
    for i in 0..dx.len() {
        let [a, b] = shrink_gradient([dx[i], dy[i]], alpha, beta);
        dx[i] = a;
        dy[i] = b;
    }
    Ok(v)
}

/// Precomputed spectra for repeated `L` solves against one blurry plane
/// and kernel under circular semantics.
struct LatentSolver {
    fft: Fft2,
    /// `conj(F K) · F B · Δ`.
    data_term: Vec<Complex64>,
    /// `|F K|² · Δ`.
    data_gain: Vec<f64>,
    dx: Vec<Complex64>,
    dy: Vec<Complex64>,
    /// `|F ∂x|² + |F ∂y|²`.
    grad_gain: Vec<f64>,
}

impl LatentSolver {
    fn new(
        blurry: &[f64],
        width: usize,
        height: usize,
        kernel: &BlurKernel,
        weights: &[f64; 6],
    ) -> Self {
        let fft = Fft2::new(width, height);
        let n = width * height;
        let mut delta = vec![0.0; n];
        for (d, &w) in Derivative::ALL.iter().zip(weights) {
            let s = fft.stencil_spectrum(&d.taps());
            for (acc, v) in delta.iter_mut().zip(&s) {
                *acc += w * v.norm_sqr();
            }
        }
        let fk = fft.kernel_spectrum(kernel);
        let fb = fft.forward_real(blurry);
        let dx = fft.stencil_spectrum(&Derivative::Dx.taps());
        let dy = fft.stencil_spectrum(&Derivative::Dy.taps());
        let data_term = (0..n).map(|i| fk[i].conj() * fb[i] * delta[i]).collect();
        let data_gain = (0..n).map(|i| fk[i].norm_sqr() * delta[i]).collect();
        let grad_gain = (0..n)
            .map(|i| dx[i].norm_sqr() + dy[i].norm_sqr())
            .collect();
        Self {
            fft,
            data_term,
            data_gain,
            dx,
            dy,
            grad_gain,
        }
    }

    /// Unclamped minimizer of the quadratic part for fixed `v`; also
    /// returns the largest imaginary residue of the inverse transform.
    fn solve(&self, vx: &[f64], vy: &[f64], alpha: f64) -> (Vec<f64>, f64) {
        let fvx = self.fft.forward_real(vx);
        let fvy = self.fft.forward_real(vy);
        let buf: Vec<Complex64> = (0..self.data_term.len())
            .map(|i| {
                let num = self.data_term[i]
                    + alpha * (self.dx[i].conj() * fvx[i] + self.dy[i].conj() * fvy[i]);
                let mut den = self.data_gain[i] + alpha * self.grad_gain[i];
                if den.abs() < DENOMINATOR_FLOOR {
                    den += DENOMINATOR_FLOOR;
                }
                num / den
            })
            .collect();
        self.fft.inverse_real(buf)
    }
}

fn padded_layout(
    image: &PlanarImage,
    kernel: &BlurKernel,
    boundary: FftBoundary,
) -> Option<PadLayout> {
    match boundary {
        FftBoundary::Circular => None,
        FftBoundary::Taper => Some(PadLayout::new(image.width(), image.height(), kernel.size())),
    }
}

/// Closed-form `L` update for fixed `v`, without clamping.
///
/// Under [`FftBoundary::Taper`] `B` is padded with the smooth blend and `v`
/// with zeros.
pub fn solve_latent_unclamped(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    v: &GradientField,
    alpha: f64,
    params: &DeconvParams,
) -> Result<PlanarImage> {
    blurry.ensure_gray()?;
    v.dx.ensure_same_shape(blurry)?;
    let (w, h) = (blurry.width(), blurry.height());
    let out = match padded_layout(blurry, kernel, params.boundary) {
        None => {
            let solver = LatentSolver::new(blurry.plane(0), w, h, kernel, &params.weights);
            solver.solve(v.dx.plane(0), v.dy.plane(0), alpha).0
        }
        Some(layout) => {
            let b = pad_plane(blurry.plane(0), w, h, layout, Padding::Taper);
            let zero_pad = |g: &PlanarImage| {
                let mut out = vec![0.0; layout.width * layout.height];
                for y in 0..h {
                    let s = (y + layout.top) * layout.width + layout.left;
                    out[s..s + w].copy_from_slice(&g.plane(0)[y * w..(y + 1) * w]);
                }
                out
            };
            let solver =
                LatentSolver::new(&b, layout.width, layout.height, kernel, &params.weights);
            let l = solver.solve(&zero_pad(&v.dx), &zero_pad(&v.dy), alpha).0;
            crop_plane(&l, layout, w, h)
        }
    };
    PlanarImage::from_vec(w, h, 1, out)
}

/// Closed-form `L` update for fixed `v`, clamped to `[0, 1]`.
pub fn solve_latent(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    v: &GradientField,
    alpha: f64,
    params: &DeconvParams,
) -> Result<PlanarImage> {
    Ok(solve_latent_unclamped(blurry, kernel, v, alpha, params)?.clamped01())
}

/// Largest imaginary residue left by the inverse transform of one solve;
/// zero up to rounding for real inputs.
pub fn solve_imaginary_residue(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    v: &GradientField,
    alpha: f64,
    weights: &[f64; 6],
) -> Result<f64> {
    blurry.ensure_gray()?;
    let solver = LatentSolver::new(
        blurry.plane(0),
        blurry.width(),
        blurry.height(),
        kernel,
        weights,
    );
    Ok(solver.solve(v.dx.plane(0), v.dy.plane(0), alpha).1)
}

fn deconvolve_plane(
    plane: &[f64],
    w: usize,
    h: usize,
    kernel: &BlurKernel,
    schedule: AlphaSchedule,
    params: &DeconvParams,
) -> Result<Vec<f64>> {
    let layout = match params.boundary {
        FftBoundary::Circular => PadLayout {
            width: w,
            height: h,
            left: 0,
            top: 0,
        },
        FftBoundary::Taper => PadLayout::new(w, h, kernel.size()),
    };
    let b = pad_plane(plane, w, h, layout, Padding::Taper);
    let solver = LatentSolver::new(&b, layout.width, layout.height, kernel, &params.weights);
    let mut latent = PlanarImage::from_vec(layout.width, layout.height, 1, b)?;
    let mut schedule = schedule;
    for _ in 0..params.inner_iterations {
        let alpha = schedule.alpha();
        let v = update_v(&latent, alpha, params.beta)?;
        let (l, _) = solver.solve(v.dx.plane(0), v.dy.plane(0), alpha);
        latent = PlanarImage::from_vec(layout.width, layout.height, 1, l)?.clamped01();
        schedule.advance();
    }
    Ok(crop_plane(latent.data(), layout, w, h))
}

/// Alternates `v ← shrink(∇L)` and `L ← solve(B, K, v)` for
/// `inner_iterations` rounds starting from `L = B`, decaying `α` after each
/// round. Color images are processed per channel with the same kernel.
pub fn deconvolve(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    schedule: AlphaSchedule,
    params: &DeconvParams,
) -> Result<PlanarImage> {
    schedule.validate()?;
    if !kernel.is_normalized(1e-6) {
        return Err(DeblurError::Parameter(
            "deconvolution kernel must be normalized".into(),
        ));
    }
    let (w, h) = (blurry.width(), blurry.height());
    if kernel.size() > w.min(h) {
        return Err(DeblurError::ImageTooSmall {
            width: w,
            height: h,
            kernel_size: kernel.size(),
        });
    }
    let planes = (0..blurry.channels())
        .into_par_iter()
        .map(|c| deconvolve_plane(blurry.plane(c), w, h, kernel, schedule, params))
        .collect::<Result<Vec<_>>>()?;
    PlanarImage::from_vec(w, h, blurry.channels(), planes.concat())
}

/// Objective value under circular boundary.
pub fn deconv_energy(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    latent: &PlanarImage,
    v: &GradientField,
    alpha: f64,
    beta: f64,
    weights: &[f64; 6],
) -> Result<f64> {
    blurry.ensure_gray()?;
    latent.ensure_same_shape(blurry)?;
    let mut e = 0.0;
    for (d, &w) in Derivative::ALL.iter().zip(weights) {
        let dl = derivative_with(latent, *d, EdgeMode::Periodic)?;
        let db = derivative_with(blurry, *d, EdgeMode::Periodic)?;
        let kdl = convolve_circular(&dl, kernel)?;
        e += w * kdl
            .data()
            .iter()
            .zip(db.data())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>();
    }
    let gx = derivative_with(latent, Derivative::Dx, EdgeMode::Periodic)?;
    let gy = derivative_with(latent, Derivative::Dy, EdgeMode::Periodic)?;
    for i in 0..gx.len() {
        let (vx, vy) = (v.dx.data()[i], v.dy.data()[i]);
        e += alpha * ((gx.data()[i] - vx).powi(2) + (gy.data()[i] - vy).powi(2));
        e += beta * vx.hypot(vy);
    }
    Ok(e)
}
