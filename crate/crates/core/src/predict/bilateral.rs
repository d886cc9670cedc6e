use rayon::prelude::*;

use crate::error::{DeblurError, Result};
use crate::imaging::PlanarImage;

/// Edge-preserving bilateral filter on a single-channel image.
///
/// The window radius is `ceil(2 σ_spatial)`; samples outside the image are
/// skipped and the weights renormalized per pixel.
pub fn bilateral_filter(
    image: &PlanarImage,
    sigma_spatial: f64,
    sigma_range: f64,
) -> Result<PlanarImage> {
    image.ensure_gray()?;
    if !(sigma_spatial > 0.0 && sigma_range > 0.0) {
        return Err(DeblurError::Parameter(format!(
            "bilateral sigmas must be positive, got {sigma_spatial} and {sigma_range}"
        )));
    }
    let radius = (2.0 * sigma_spatial).ceil() as isize;
    let (w, h) = (image.width() as isize, image.height() as isize);
    let spatial: Vec<f64> = (-radius..=radius)
        .flat_map(|dy| (-radius..=radius).map(move |dx| (dx, dy)))
        .map(|(dx, dy)| {
            (-((dx * dx + dy * dy) as f64) / (2.0 * sigma_spatial * sigma_spatial)).exp()
        })
        .collect();
    let inv_range = 1.0 / (2.0 * sigma_range * sigma_range);
    let side = (2 * radius + 1) as usize;
    let src = image.plane(0);
    let mut out = vec![0.0; src.len()];
    out.par_chunks_mut(w as usize)
        .enumerate()
        .for_each(|(y, row)| {
            let y = y as isize;
            for (x, o) in row.iter_mut().enumerate() {
                let x = x as isize;
                let center = src[(y * w + x) as usize];
                let (mut acc, mut norm) = (0.0, 0.0);
                for dy in -radius..=radius {
                    let sy = y + dy;
                    if sy < 0 || sy >= h {
                        continue;
                    }
                    for dx in -radius..=radius {
                        let sx = x + dx;
                        if sx < 0 || sx >= w {
                            continue;
                        }
                        let v = src[(sy * w + sx) as usize];
                        let d = v - center;
                        let wgt = spatial[(dy + radius) as usize * side + (dx + radius) as usize]
                            * (-d * d * inv_range).exp();
                        acc += wgt * v;
                        norm += wgt;
                    }
                }
                *o = acc / norm;
            }
        });
    PlanarImage::from_vec(image.width(), image.height(), 1, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_unchanged() {
        let img = PlanarImage::filled(10, 8, 1, 0.42);
        let out = bilateral_filter(&img, 2.0, 0.1).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.42).abs() < 1e-12));
    }

    #[test]
    fn step_edge_survives() {
        let img = PlanarImage::from_fn(20, 10, |x, _| if x < 10 { 0.2 } else { 0.8 });
        let out = bilateral_filter(&img, 2.0, 0.05).unwrap();
        for y in 0..10 {
            for x in 0..20 {
                assert!((out.at(x, y) - img.at(x, y)).abs() < 1e-3, "({x},{y})");
            }
        }
    }

    #[test]
    fn rejects_bad_sigma() {
        let img = PlanarImage::new(4, 4, 1);
        assert!(bilateral_filter(&img, 0.0, 0.1).is_err());
        assert!(bilateral_filter(&img, 1.0, -1.0).is_err());
    }
}
