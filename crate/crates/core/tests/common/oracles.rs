//! Independent re-computations shared by the oracle suites and the
//! acceptance harness.

use nalgebra::{DMatrix, DVector};
use sdeblur::deconv::DERIVATIVE_WEIGHTS;
use sdeblur::imaging::{derivative_with, Derivative, EdgeMode, GradientField, PlanarImage};
use sdeblur::kernel_est::{GradientPairs, PAIR_WEIGHTS};
use sdeblur::saliency::{BinaryMask, Rect};
use sdeblur::BlurKernel;

use super::circular;

/// Exhaustive search with the same tie rule: area, then smaller `y`, `x`
/// and height.
pub fn brute_force_rectangle(mask: &BinaryMask, min_side: usize) -> Option<Rect> {
    let (w, h) = (mask.width(), mask.height());
    let mut best: Option<Rect> = None;
    for y in 0..h {
        for x in 0..w {
            for rh in min_side..=h - y {
                for rw in min_side..=w - x {
                    let clear = (y..y + rh).all(|yy| (x..x + rw).all(|xx| !mask.get(xx, yy)));
                    if !clear {
                        continue;
                    }
                    let cand = Rect::new(x, y, rw, rh);
                    let better = match best {
                        None => true,
                        Some(b) => {
                            cand.area() > b.area()
                                || (cand.area() == b.area() && (y, x, rh) < (b.y, b.x, b.h))
                        }
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best
}

/// Amplitude `s·√e` puts the steepest gradient at unit norm.
pub fn gaussian_blob(n: usize, s: f64) -> PlanarImage {
    let c = (n as f64 - 1.0) / 2.0;
    let a = s * 0.5f64.exp().sqrt();
    PlanarImage::from_fn(n, n, |x, y| {
        let r2 = (x as f64 - c).powi(2) + (y as f64 - c).powi(2);
        a * (-r2 / (2.0 * s * s)).exp()
    })
}

type M2 = [[f64; 2]; 2];

fn mul(a: M2, b: M2) -> M2 {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// `trace(T H)` assembled from explicit 2×2 matrices.
pub fn trace_th(img: &PlanarImage, x: usize, y: usize) -> f64 {
    let p = |dx: isize, dy: isize| img.at_clamped(x as isize + dx, y as isize + dy);
    let gx = (p(1, 0) - p(-1, 0)) / 2.0;
    let gy = (p(0, 1) - p(0, -1)) / 2.0;
    let hxx = p(1, 0) + p(-1, 0) - 2.0 * p(0, 0);
    let hyy = p(0, 1) + p(0, -1) - 2.0 * p(0, 0);
    let hxy = (p(1, 1) + p(-1, -1) - p(1, -1) - p(-1, 1)) / 4.0;
    let hess = [[hxx, hxy], [hxy, hyy]];
    let g2 = gx * gx + gy * gy;
    let t = if g2.sqrt() < 1e-8 {
        [[1.0, 0.0], [0.0, 1.0]]
    } else {
        let n = g2.sqrt();
        let (eta, xi) = ([gx / n, gy / n], [-gy / n, gx / n]);
        let (ce, cx) = (1.0 / (1.0 + g2), 1.0 / (1.0 + g2).sqrt());
        let outer = |v: [f64; 2], c: f64| {
            [
                [c * v[0] * v[0], c * v[0] * v[1]],
                [c * v[1] * v[0], c * v[1] * v[1]],
            ]
        };
        let (a, b) = (outer(eta, ce), outer(xi, cx));
        [
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ]
    };
    let th = mul(t, hess);
    th[0][0] + th[1][1]
}

/// The six periodic derivative operators written out by hand, in the order
/// `1, ∂x, ∂y, ∂xx, ∂yy, ∂xy`.
pub fn literal_derivative(which: usize, img: &PlanarImage) -> PlanarImage {
    let p =
        |x: usize, y: usize, dx: isize, dy: isize| img.at_wrapped(x as isize + dx, y as isize + dy);
    PlanarImage::from_fn(img.width(), img.height(), |x, y| match which {
        0 => p(x, y, 0, 0),
        1 => p(x, y, 1, 0) - p(x, y, 0, 0),
        2 => p(x, y, 0, 1) - p(x, y, 0, 0),
        3 => p(x, y, 2, 0) - 2.0 * p(x, y, 1, 0) + p(x, y, 0, 0),
        4 => p(x, y, 0, 2) - 2.0 * p(x, y, 0, 1) + p(x, y, 0, 0),
        _ => p(x, y, 1, 1) - p(x, y, 0, 1) - p(x, y, 1, 0) + p(x, y, 0, 0),
    })
}

/// Dense matrix of a linear image operator, built column by column.
pub fn matrix_of(w: usize, h: usize, op: impl Fn(&PlanarImage) -> PlanarImage) -> DMatrix<f64> {
    let n = w * h;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = PlanarImage::new(w, h, 1);
        e.data_mut()[j] = 1.0;
        let col = op(&e);
        for i in 0..n {
            m[(i, j)] = col.data()[i];
        }
    }
    m
}

/// Relative residual of `latent` in the dense normal equations of the
/// quadratic part of the deconvolution objective, circular boundary.
pub fn normal_equation_residual(
    blurry: &PlanarImage,
    kernel: &BlurKernel,
    v: &GradientField,
    alpha: f64,
    latent: &PlanarImage,
) -> f64 {
    let (w, h) = (blurry.width(), blurry.height());
    let c = matrix_of(w, h, |e| circular(e, kernel));
    let d: Vec<DMatrix<f64>> = (0..6)
        .map(|i| matrix_of(w, h, |e| literal_derivative(i, e)))
        .collect();
    let bv = DVector::from_column_slice(blurry.data());
    let mut a = (d[1].transpose() * &d[1] + d[2].transpose() * &d[2]) * alpha;
    let mut rhs = (d[1].transpose() * DVector::from_column_slice(v.dx.data())
        + d[2].transpose() * DVector::from_column_slice(v.dy.data()))
        * alpha;
    for (i, &wt) in DERIVATIVE_WEIGHTS.iter().enumerate() {
        let kd = &c * &d[i];
        a += kd.transpose() * &kd * wt;
        rhs += kd.transpose() * (&d[i] * &bv) * wt;
    }
    let residual = &a * DVector::from_column_slice(latent.data()) - &rhs;
    residual.norm() / rhs.norm()
}

/// Periodic gradient pairs of a sharp image and its circular blur.
pub fn pairs_for(sharp: &PlanarImage, kernel: &BlurKernel) -> GradientPairs {
    let blurry = circular(sharp, kernel);
    let d = |w| derivative_with(sharp, w, EdgeMode::Periodic).unwrap();
    let p = GradientField::new(d(Derivative::Dx), d(Derivative::Dy)).unwrap();
    GradientPairs::new(&p, &blurry, PAIR_WEIGHTS, EdgeMode::Periodic).unwrap()
}
