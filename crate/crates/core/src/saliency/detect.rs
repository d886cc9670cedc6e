use crate::error::Result;
use crate::imaging::{rgb_to_lab, PlanarImage};

/// Peak Lab distance below which a saliency map counts as flat.
pub const FLAT_SALIENCY: f64 = 1e-9;

const BINOMIAL5: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

/// Separable 5x5 binomial low-pass with replicate boundary, per channel.
pub fn binomial_blur(image: &PlanarImage) -> PlanarImage {
    let (w, h) = (image.width() as isize, image.height() as isize);
    let mut out = image.clone();
    for c in 0..image.channels() {
        let src = image.channel(c);
        let mut tmp = PlanarImage::new(src.width(), src.height(), 1);
        for y in 0..h {
            for x in 0..w {
                let v: f64 = (-2..=2)
                    .map(|d| BINOMIAL5[(d + 2) as usize] * src.at_clamped(x + d, y))
                    .sum();
                tmp.set(x as usize, y as usize, 0, v);
            }
        }
        for y in 0..h {
            for x in 0..w {
                let v: f64 = (-2..=2)
                    .map(|d| BINOMIAL5[(d + 2) as usize] * tmp.at_clamped(x, y + d))
                    .sum();
                out.set(x as usize, y as usize, c, v);
            }
        }
    }
    out
}

/// Frequency-tuned saliency of an image already in L*a*b*.
///
/// Each pixel scores the Euclidean distance between the image's mean Lab
/// color and the low-passed Lab color at that pixel. The map is scaled so
/// its maximum is one. Maps whose peak is below [`FLAT_SALIENCY`] Lab
/// units are rounding noise of a uniform image and come back all zero.
pub fn saliency_map_lab(lab: &PlanarImage) -> Result<PlanarImage> {
    lab.ensure_channels(3)?;
    let means: Vec<f64> = (0..3).map(|c| lab.channel(c).mean()).collect();
    let blurred = binomial_blur(lab);
    let mut s = PlanarImage::new(lab.width(), lab.height(), 1);
    for i in 0..lab.area() {
        let d2: f64 = (0..3)
            .map(|c| {
                let d = means[c] - blurred.plane(c)[i];
                d * d
            })
            .sum();
        s.plane_mut(0)[i] = d2.sqrt();
    }
    let max = s.max();
    for v in s.data_mut() {
        *v = if max < FLAT_SALIENCY { 0.0 } else { *v / max };
    }
    Ok(s)
}

/// Frequency-tuned saliency of an sRGB image; see [`saliency_map_lab`].
pub fn saliency_map(image: &PlanarImage) -> Result<PlanarImage> {
    image.ensure_channels(3)?;
    saliency_map_lab(&rgb_to_lab(image)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DeblurError;

    #[test]
    fn constant_color_has_no_saliency() {
        let img = PlanarImage::from_planes(&[
            PlanarImage::filled(16, 12, 1, 0.3),
            PlanarImage::filled(16, 12, 1, 0.6),
            PlanarImage::filled(16, 12, 1, 0.1),
        ])
        .unwrap();
        let s = saliency_map(&img).unwrap();
        assert!(s.data().iter().all(|&v| v.abs() < 1e-9));
    }

    #[test]
    fn gray_input_is_rejected() {
        assert!(matches!(
            saliency_map(&PlanarImage::new(4, 4, 1)),
            Err(DeblurError::Channels {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn bright_square_holds_the_peak() {
        let plane = PlanarImage::from_fn(64, 64, |x, y| {
            if (28..36).contains(&x) && (28..36).contains(&y) {
                0.95
            } else {
                0.1
            }
        });
        let img = PlanarImage::from_planes(&[plane.clone(), plane.clone(), plane]).unwrap();
        let s = saliency_map(&img).unwrap();
        let (mut best, mut arg) = (f64::MIN, (0, 0));
        for y in 0..64 {
            for x in 0..64 {
                if s.at(x, y) > best {
                    best = s.at(x, y);
                    arg = (x, y);
                }
            }
        }
        assert!(
            (28..36).contains(&arg.0) && (28..36).contains(&arg.1),
            "{arg:?}"
        );
        assert!((best - 1.0).abs() < 1e-12);
    }
}
