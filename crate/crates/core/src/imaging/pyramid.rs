use crate::error::{DeblurError, Result};

/// One level of the coarse-to-fine schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PyramidLevel {
    pub width: usize,
    pub height: usize,
    pub kernel_size: usize,
    /// Linear scale relative to the full-resolution image.
    pub scale: f64,
}

/// Nearest odd integer, never below 1.
pub fn round_to_odd(v: f64) -> usize {
    let k = ((v - 1.0) / 2.0).round().max(0.0) as usize;
    2 * k + 1
}

/// Scale schedule for a `width x height` image with a `kernel_size` blur.
///
/// The kernel is shrunk by `factor` per level and rounded to odd until it
/// reaches `min_kernel`; that level is the coarsest. Levels are returned
/// coarse to fine and the last one is the original size.
pub fn build_pyramid(
    width: usize,
    height: usize,
    kernel_size: usize,
    min_kernel: usize,
    factor: f64,
) -> Result<Vec<PyramidLevel>> {
    if !(factor > 0.0 && factor < 1.0) {
        return Err(DeblurError::Parameter(format!(
            "pyramid factor must lie in (0, 1), got {factor}"
        )));
    }
    let mut levels = vec![PyramidLevel {
        width,
        height,
        kernel_size,
        scale: 1.0,
    }];
    let min_kernel = round_to_odd(min_kernel as f64);
    if kernel_size > min_kernel {
        let mut scale = 1.0;
        loop {
            scale *= factor;
            let prev = levels.last().unwrap().kernel_size;
            let k = round_to_odd(kernel_size as f64 * scale).clamp(min_kernel, prev);
            levels.push(PyramidLevel {
                width: ((width as f64 * scale).round() as usize).max(1),
                height: ((height as f64 * scale).round() as usize).max(1),
                kernel_size: k,
                scale,
            });
            if k <= min_kernel {
                break;
            }
        }
    }
    levels.reverse();
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FACTOR: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn degenerate_schedule_has_one_level() {
        let p = build_pyramid(40, 30, 3, 3, FACTOR).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].width, p[0].height, p[0].kernel_size), (40, 30, 3));
        // smaller than the minimum is not an error either
        assert_eq!(build_pyramid(40, 30, 1, 3, FACTOR).unwrap().len(), 1);
    }

    #[test]
    fn seventeen_tap_schedule() {
        let p = build_pyramid(256, 256, 17, 3, FACTOR).unwrap();
        let ks: Vec<usize> = p.iter().map(|l| l.kernel_size).collect();
        assert_eq!(ks, vec![3, 5, 7, 9, 13, 17]);
        assert_eq!((p[5].width, p[5].height), (256, 256));
    }

    #[test]
    fn twenty_five_tap_schedule_has_seven_levels() {
        let p = build_pyramid(300, 200, 25, 3, FACTOR).unwrap();
        assert_eq!(p.len(), 7);
        let expected = ((3.0f64 / 25.0).ln() / FACTOR.ln()).ceil() as usize;
        assert_eq!(p.len(), expected);
    }

    #[test]
    fn rejects_bad_factor() {
        assert!(build_pyramid(10, 10, 5, 3, 1.0).is_err());
        assert!(build_pyramid(10, 10, 5, 3, 0.0).is_err());
    }
}
