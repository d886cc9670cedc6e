use super::image::PlanarImage;
use crate::error::{DeblurError, Result};

/// Bilinear resampling with pixel-center alignment.
pub fn resize(image: &PlanarImage, new_width: usize, new_height: usize) -> Result<PlanarImage> {
    if new_width == 0 || new_height == 0 {
        return Err(DeblurError::Parameter(format!(
            "target size {new_width}x{new_height} must be positive"
        )));
    }
    let (w, h) = (image.width(), image.height());
    if (w, h) == (new_width, new_height) {
        return Ok(image.clone());
    }
    let sx = w as f64 / new_width as f64;
    let sy = h as f64 / new_height as f64;
    let taps = |dst: usize, scale: f64, len: usize| -> (usize, usize, f64) {
        let s = ((dst as f64 + 0.5) * scale - 0.5).clamp(0.0, (len - 1) as f64);
        let i0 = s.floor() as usize;
        let i1 = (i0 + 1).min(len - 1);
        (i0, i1, s - i0 as f64)
    };
    let xs: Vec<_> = (0..new_width).map(|x| taps(x, sx, w)).collect();
    let ys: Vec<_> = (0..new_height).map(|y| taps(y, sy, h)).collect();
    let mut out = PlanarImage::new(new_width, new_height, image.channels());
    for c in 0..image.channels() {
        let src = image.plane(c);
        let dst = out.plane_mut(c);
        for (y, &(y0, y1, fy)) in ys.iter().enumerate() {
            for (x, &(x0, x1, fx)) in xs.iter().enumerate() {
                let top = src[y0 * w + x0] * (1.0 - fx) + src[y0 * w + x1] * fx;
                let bottom = src[y1 * w + x0] * (1.0 - fx) + src[y1 * w + x1] * fx;
                dst[y * new_width + x] = top * (1.0 - fy) + bottom * fy;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_size_is_identity() {
        let img = PlanarImage::from_fn(5, 4, |x, y| (x * 7 + y) as f64 / 40.0);
        assert_eq!(resize(&img, 5, 4).unwrap(), img);
    }

    #[test]
    fn constant_survives_any_resize() {
        let img = PlanarImage::filled(9, 7, 2, 0.25);
        let out = resize(&img, 4, 13).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn zero_target_is_rejected() {
        assert!(resize(&PlanarImage::new(3, 3, 1), 0, 3).is_err());
    }
}
