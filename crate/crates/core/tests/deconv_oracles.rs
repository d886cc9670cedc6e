mod common;

use common::oracles::normal_equation_residual;
use common::{circular, random_image};
use sdeblur::bench::{rmse, test_scene};
use sdeblur::deconv::{
    deconv_energy, deconvolve, shrink_gradient, solve_imaginary_residue, solve_latent_unclamped,
    update_v, AlphaSchedule, DeconvParams, FftBoundary, DERIVATIVE_WEIGHTS,
};
use sdeblur::imaging::{convolve, ConvMode, GradientField, Padding};
use sdeblur::BlurKernel;

fn circular_params(beta: f64) -> DeconvParams {
    DeconvParams {
        beta,
        boundary: FftBoundary::Circular,
        ..DeconvParams::default()
    }
}

fn gaussian(size: usize, sigma: f64) -> BlurKernel {
    let r = (size / 2) as f64;
    BlurKernel::from_fn(size, |x, y| {
        (-((x as f64 - r).powi(2) + (y as f64 - r).powi(2)) / (2.0 * sigma * sigma)).exp()
    })
    .unwrap()
    .normalized()
    .unwrap()
}

#[test]
fn latent_solve_satisfies_the_dense_normal_equations() {
    let (w, h) = (16, 16);
    let kernel = gaussian(5, 1.0);
    let blurry = circular(&random_image(w, h, 1, 1), &kernel);
    let v = GradientField::new(
        random_image(w, h, 1, 2).map(|t| t - 0.5),
        random_image(w, h, 1, 3).map(|t| t - 0.5),
    )
    .unwrap();
    let alpha = 0.2;
    let l = solve_latent_unclamped(&blurry, &kernel, &v, alpha, &circular_params(1.0)).unwrap();

    let rel = normal_equation_residual(&blurry, &kernel, &v, alpha, &l);
    assert!(rel <= 1e-6, "relative residual {rel}");
}

#[test]
fn inverse_transform_is_real() {
    let kernel = gaussian(5, 1.2);
    let blurry = random_image(20, 14, 1, 4);
    let v = update_v(&blurry, 0.01, 0.02).unwrap();
    let r = solve_imaginary_residue(&blurry, &kernel, &v, 0.01, &DERIVATIVE_WEIGHTS).unwrap();
    assert!(r <= 1e-9, "{r}");
}

#[test]
fn identity_kernel_with_vanishing_alpha_returns_the_input() {
    let b = random_image(16, 12, 1, 5);
    let v = update_v(&b, 0.2, 1.0).unwrap();
    let l =
        solve_latent_unclamped(&b, &BlurKernel::delta(3), &v, 1e-8, &circular_params(1.0)).unwrap();
    assert!(common::max_abs_diff(l.data(), b.data()) <= 1e-4);
}

#[test]
fn shrinkage_hand_case() {
    assert_eq!(shrink_gradient([3.0, 4.0], 0.2, 1.0), [1.5, 2.0]);
    for g in [[0.0, 0.0], [1.5, 2.0], [2.5, 0.0], [-1.0, 1.0]] {
        assert_eq!(shrink_gradient(g, 0.2, 1.0), [0.0, 0.0]);
    }
}

#[test]
fn objective_never_increases_at_fixed_alpha() {
    let kernel = gaussian(5, 1.0);
    let sharp = test_scene(24, 24, 1, 3).unwrap();
    let blurry = circular(&sharp, &kernel);
    for (alpha, beta) in [(0.2, 1.0), (0.2, 0.02), (0.01, 0.005)] {
        let params = circular_params(beta);
        let mut l = blurry.clone();
        let mut v = update_v(&l, alpha, beta).unwrap();
        let mut prev =
            deconv_energy(&blurry, &kernel, &l, &v, alpha, beta, &params.weights).unwrap();
        for _ in 0..5 {
            l = solve_latent_unclamped(&blurry, &kernel, &v, alpha, &params).unwrap();
            let e = deconv_energy(&blurry, &kernel, &l, &v, alpha, beta, &params.weights).unwrap();
            assert!(e <= prev * (1.0 + 1e-9), "L step {e} > {prev}");
            v = update_v(&l, alpha, beta).unwrap();
            let e2 = deconv_energy(&blurry, &kernel, &l, &v, alpha, beta, &params.weights).unwrap();
            assert!(e2 <= e * (1.0 + 1e-9), "v step {e2} > {e}");
            prev = e2;
        }
    }
}

#[test]
fn deconvolution_reduces_error_of_a_gaussian_blur() {
    let sharp = test_scene(64, 64, 1, 2).unwrap();
    let kernel = gaussian(5, 1.0);
    let blurry = convolve(&sharp, &kernel, ConvMode::Fft, Padding::Replicate).unwrap();
    let out = deconvolve(
        &blurry,
        &kernel,
        AlphaSchedule::default(),
        &DeconvParams::default(),
    )
    .unwrap();
    let (before, after) = (
        rmse(&blurry, &sharp, None).unwrap(),
        rmse(&out, &sharp, None).unwrap(),
    );
    assert!(after < before, "{after} vs {before}");
}

#[test]
fn identity_kernel_deconvolution_is_nearly_lossless() {
    let b = test_scene(32, 32, 3, 6).unwrap();
    let out = deconvolve(
        &b,
        &BlurKernel::delta(3),
        AlphaSchedule::default(),
        &DeconvParams::default(),
    )
    .unwrap();
    assert!(common::max_abs_diff(out.data(), b.data()) <= 1e-3);
}
