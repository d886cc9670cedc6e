use crate::error::{DeblurError, Result};
use crate::imaging::PlanarImage;

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        a.signum() * a.abs().min(b.abs())
    } else {
        0.0
    }
}

/// Shock filter `I ← clamp(I − sign(ΔI)·|∇I|·dt)`.
///
/// `|∇I|` uses the minmod of one-sided differences and `ΔI` the five-point
/// Laplacian, both with replicate boundary.
pub fn shock_filter(image: &PlanarImage, dt: f64, iterations: usize) -> Result<PlanarImage> {
    image.ensure_gray()?;
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(DeblurError::Parameter(format!(
            "dt must lie in (0, 1], got {dt}"
        )));
    }
    let (w, h) = (image.width(), image.height());
    let mut cur = image.clone();
    for _ in 0..iterations {
        let mut next = cur.clone();
        for y in 0..h as isize {
            for x in 0..w as isize {
                let p = |dx: isize, dy: isize| cur.at_clamped(x + dx, y + dy);
                let c = p(0, 0);
                let gx = minmod(p(1, 0) - c, c - p(-1, 0));
                let gy = minmod(p(0, 1) - c, c - p(0, -1));
                let lap = p(1, 0) + p(-1, 0) + p(0, 1) + p(0, -1) - 4.0 * c;
                let v = c - sign(lap) * gx.hypot(gy) * dt;
                next.set(x as usize, y as usize, 0, v.clamp(0.0, 1.0));
            }
        }
        cur = next;
    }
    Ok(cur)
}
