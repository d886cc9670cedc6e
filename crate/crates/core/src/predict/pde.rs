use crate::error::{DeblurError, Result};
use crate::imaging::PlanarImage;

use super::bilateral::bilateral_filter;

/// Below this gradient norm the flow directions are undefined and the
/// diffusion tensor falls back to the identity.
pub const FLAT_GRADIENT: f64 = 1e-8;

/// Per-pixel quantities of the anisotropic edge-enhancing flow.
///
/// `eta` follows the gradient and `xi` is its perpendicular (the edge
/// tangent). The diffusion tensor is `T = c_xi ξξᵀ + c_eta ηηᵀ` and
/// `enhancement` holds `trace(T H)`.
#[derive(Clone, Debug)]
pub struct PdeTensors {
    pub grad_x: PlanarImage,
    pub grad_y: PlanarImage,
    pub grad_norm: PlanarImage,
    pub eta_x: PlanarImage,
    pub eta_y: PlanarImage,
    pub xi_x: PlanarImage,
    pub xi_y: PlanarImage,
    pub c_eta: PlanarImage,
    pub c_xi: PlanarImage,
    pub ixx: PlanarImage,
    pub ixy: PlanarImage,
    pub iyy: PlanarImage,
    pub enhancement: PlanarImage,
}

/// Flow weight across edges: `1 / (1 + |∇I|²)`.
pub fn weight_across(grad_norm: f64) -> f64 {
    1.0 / (1.0 + grad_norm * grad_norm)
}

/// Flow weight along edges: `1 / sqrt(1 + |∇I|²)`.
pub fn weight_along(grad_norm: f64) -> f64 {
    1.0 / (1.0 + grad_norm * grad_norm).sqrt()
}

/// Gradient, Hessian, flow directions and `trace(TH)` of a gray image.
///
/// Central differences throughout (`[1, -2, 1]` and the four-corner cross
/// stencil for `I_xy`) with replicate boundary.
pub fn pde_tensors(image: &PlanarImage) -> Result<PdeTensors> {
    image.ensure_gray()?;
    let (w, h) = (image.width(), image.height());
    let blank = || PlanarImage::new(w, h, 1);
    let mut t = PdeTensors {
        grad_x: blank(),
        grad_y: blank(),
        grad_norm: blank(),
        eta_x: blank(),
        eta_y: blank(),
        xi_x: blank(),
        xi_y: blank(),
        c_eta: blank(),
        c_xi: blank(),
        ixx: blank(),
        ixy: blank(),
        iyy: blank(),
        enhancement: blank(),
    };
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| image.at_clamped(x + dx, y + dy);
            let c = p(0, 0);
            let gx = 0.5 * (p(1, 0) - p(-1, 0));
            let gy = 0.5 * (p(0, 1) - p(0, -1));
            let ixx = p(1, 0) - 2.0 * c + p(-1, 0);
            let iyy = p(0, 1) - 2.0 * c + p(0, -1);
            let ixy = 0.25 * (p(1, 1) - p(1, -1) - p(-1, 1) + p(-1, -1));
            let norm = gx.hypot(gy);
            let c_eta = weight_across(norm);
            let c_xi = weight_along(norm);
            let (ex, ey) = if norm > 0.0 {
                (gx / norm, gy / norm)
            } else {
                (0.0, 0.0)
            };
            let (xx, xy) = (-ey, ex);
            let enhancement = if norm < FLAT_GRADIENT {
                ixx + iyy
            } else {
                let along = xx * xx * ixx + 2.0 * xx * xy * ixy + xy * xy * iyy;
                let across = ex * ex * ixx + 2.0 * ex * ey * ixy + ey * ey * iyy;
                c_xi * along + c_eta * across
            };
            let (ux, uy) = (x as usize, y as usize);
            t.grad_x.set(ux, uy, 0, gx);
            t.grad_y.set(ux, uy, 0, gy);
            t.grad_norm.set(ux, uy, 0, norm);
            t.eta_x.set(ux, uy, 0, ex);
            t.eta_y.set(ux, uy, 0, ey);
            t.xi_x.set(ux, uy, 0, xx);
            t.xi_y.set(ux, uy, 0, xy);
            t.c_eta.set(ux, uy, 0, c_eta);
            t.c_xi.set(ux, uy, 0, c_xi);
            t.ixx.set(ux, uy, 0, ixx);
            t.ixy.set(ux, uy, 0, ixy);
            t.iyy.set(ux, uy, 0, iyy);
            t.enhancement.set(ux, uy, 0, enhancement);
        }
    }
    Ok(t)
}

/// Parameters of the latent prediction step.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictParams {
    /// Edge-enhancement strength.
    pub lambda: f64,
    pub sigma_spatial: f64,
    pub sigma_range: f64,
    pub pde_iterations: usize,
}

impl Default for PredictParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            sigma_spatial: 2.0,
            sigma_range: 0.1,
            pde_iterations: 1,
        }
    }
}

/// Output of [`predict_latent`].
#[derive(Clone, Debug)]
pub struct Prediction {
    pub latent: PlanarImage,
    /// `−λ·trace(TH)` from the last iteration (zero when none ran).
    pub edge_map: PlanarImage,
}

/// Sharpened proxy of the latent image: bilateral pre-smoothing, then
/// `pde_iterations` steps of `I ← clamp(I − λ·trace(TH))`.
pub fn predict_latent(image: &PlanarImage, params: &PredictParams) -> Result<Prediction> {
    image.ensure_gray()?;
    if !(params.lambda >= 0.0) {
        return Err(DeblurError::Parameter(format!(
            "lambda must be non-negative, got {}",
            params.lambda
        )));
    }
    let mut latent = bilateral_filter(image, params.sigma_spatial, params.sigma_range)?;
    let mut edge_map = PlanarImage::new(image.width(), image.height(), 1);
    for _ in 0..params.pde_iterations {
        let t = pde_tensors(&latent)?;
        edge_map = t.enhancement.map(|d| -params.lambda * d);
        latent = latent.zip_map(&edge_map, |v, e| (v + e).clamp(0.0, 1.0))?;
    }
    Ok(Prediction { latent, edge_map })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_ramp_have_no_enhancement() {
        let c = PlanarImage::filled(9, 9, 1, 0.3);
        assert!(pde_tensors(&c)
            .unwrap()
            .enhancement
            .data()
            .iter()
            .all(|&v| v == 0.0));
        let ramp = PlanarImage::from_fn(12, 10, |x, y| 0.02 * x as f64 + 0.03 * y as f64);
        let t = pde_tensors(&ramp).unwrap();
        for y in 1..9 {
            for x in 1..11 {
                assert!(t.enhancement.at(x, y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_is_orthonormal_and_weights_ordered() {
        let img = PlanarImage::from_fn(16, 16, |x, y| {
            ((x as f64 * 0.7).sin() + (y as f64 * 0.3).cos()) * 3.0
        });
        let t = pde_tensors(&img).unwrap();
        for i in 0..img.area() {
            let (ex, ey) = (t.eta_x.data()[i], t.eta_y.data()[i]);
            let (xx, xy) = (t.xi_x.data()[i], t.xi_y.data()[i]);
            let (ce, cx) = (t.c_eta.data()[i], t.c_xi.data()[i]);
            assert!(ce <= cx && cx <= 1.0);
            if t.grad_norm.data()[i] > 0.0 {
                assert!((ex * xx + ey * xy).abs() < 1e-12);
                assert!((ex.hypot(ey) - 1.0).abs() < 1e-12);
                assert!((xx.hypot(xy) - 1.0).abs() < 1e-12);
                assert!(ce < cx);
            } else {
                assert_eq!((ce, cx), (1.0, 1.0));
            }
        }
    }

    #[test]
    fn weight_limits() {
        assert_eq!((weight_across(0.0), weight_along(0.0)), (1.0, 1.0));
        for g in [1.0, 10.0, 100.0] {
            assert!(weight_across(g) < weight_along(g) && weight_along(g) < 1.0);
        }
        assert!(weight_along(100.0) < 0.011 && weight_across(100.0) < 1.1e-4);
    }

    #[test]
    fn zero_lambda_is_plain_bilateral() {
        let img = PlanarImage::from_fn(12, 12, |x, y| if x + y < 12 { 0.3 } else { 0.7 });
        let params = PredictParams {
            lambda: 0.0,
            ..PredictParams::default()
        };
        let out = predict_latent(&img, &params).unwrap();
        assert_eq!(out.latent, bilateral_filter(&img, 2.0, 0.1).unwrap());
    }

    #[test]
    fn prediction_stays_in_range() {
        let img = PlanarImage::from_fn(
            20,
            20,
            |x, y| if (x / 3 + y / 4) % 2 == 0 { 0.05 } else { 0.97 },
        );
        let out = predict_latent(
            &img,
            &PredictParams {
                lambda: 3.0,
                pde_iterations: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(out.latent.data().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
