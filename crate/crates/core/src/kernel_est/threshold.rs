use std::f64::consts::PI;

use crate::error::Result;
use crate::imaging::{derivative, Derivative, GradientField, PlanarImage};

/// Number of quantized gradient directions (0°, 45°, 90°, 135°).
pub const DIRECTION_BINS: usize = 4;

/// Direction bin of a gradient, folding opposite directions together.
pub fn direction_bin(dx: f64, dy: f64) -> usize {
    let a = dy.atan2(dx).rem_euclid(PI);
    ((a / (PI / 4.0)).round() as usize) % DIRECTION_BINS
}

/// Per-bin magnitude thresholds keeping at least `target` pixels per bin.
///
/// A bin holding `target` or fewer nonzero gradients keeps all of them;
/// an empty bin has no threshold. `target` of zero is treated as one, so
/// each bin keeps at least its strongest pixel.
pub fn direction_thresholds(
    gradients: &GradientField,
    target: usize,
) -> [Option<f64>; DIRECTION_BINS] {
    let target = target.max(1);
    let mut bins: [Vec<f64>; DIRECTION_BINS] = Default::default();
    for (&dx, &dy) in gradients.dx.data().iter().zip(gradients.dy.data()) {
        let m = dx.hypot(dy);
        if m > 0.0 {
            bins[direction_bin(dx, dy)].push(m);
        }
    }
    bins.map(|mut mags| {
        if mags.is_empty() {
            return None;
        }
        mags.sort_unstable_by(|a, b| b.total_cmp(a));
        Some(mags[target.min(mags.len()) - 1])
    })
}

/// Keeps only the strongest gradients of the predicted image.
///
/// The per-bin target is `ratio · kernel_size · sqrt(width · height)`;
/// gradients below their bin's threshold are zeroed. Forward differences
/// with replicate boundary.
pub fn threshold_gradients(
    predicted: &PlanarImage,
    kernel_size: usize,
    ratio: f64,
) -> Result<GradientField> {
    predicted.ensure_gray()?;
    let grads = GradientField::new(
        derivative(predicted, Derivative::Dx)?,
        derivative(predicted, Derivative::Dy)?,
    )?;
    let target =
        (ratio.max(0.0) * kernel_size as f64 * (predicted.area() as f64).sqrt()).ceil() as usize;
    Ok(apply_thresholds(&grads, target))
}

/// Zeroes every gradient below its direction bin's threshold.
pub fn apply_thresholds(grads: &GradientField, target: usize) -> GradientField {
    let thresholds = direction_thresholds(grads, target);
    let mut out = grads.clone();
    let (dx, dy) = (out.dx.data_mut(), out.dy.data_mut());
    for i in 0..dx.len() {
        let m = dx[i].hypot(dy[i]);
        let keep = m > 0.0 && thresholds[direction_bin(dx[i], dy[i])].is_some_and(|t| m >= t);
        if !keep {
            dx[i] = 0.0;
            dy[i] = 0.0;
        }
    }
    out
}
