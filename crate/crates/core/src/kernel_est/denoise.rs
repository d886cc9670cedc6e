use crate::error::{DeblurError, Result};
use crate::imaging::BlurKernel;

/// 8-connected components of the positive support, in raster order of
/// their first pixel.
fn components(k: &BlurKernel) -> Vec<Vec<usize>> {
    let n = k.size();
    let w = k.weights();
    let mut seen = vec![false; w.len()];
    let mut out = Vec::new();
    for start in 0..w.len() {
        if seen[start] || w[start] <= 0.0 {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            let (x, y) = ((i % n) as isize, (i / n) as isize);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= n as isize || ny >= n as isize {
                        continue;
                    }
                    let j = ny as usize * n + nx as usize;
                    if !seen[j] && w[j] > 0.0 {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Removes estimation noise from a kernel.
///
/// Weights below 1/20 of the maximum are zeroed, then 8-connected
/// components with fewer than `size² / divisor` pixels are dropped (if that
/// would drop everything, the largest component is kept). The two rules
/// repeat until nothing changes, and the result is normalized.
pub fn denoise_kernel(kernel: &BlurKernel, divisor: f64) -> Result<BlurKernel> {
    if !kernel.weights().iter().any(|&v| v > 0.0) {
        return Err(DeblurError::DegenerateKernel);
    }
    let mut k = kernel.clone();
    for v in k.weights_mut() {
        *v = v.max(0.0);
    }
    let min_area = (k.size() * k.size()) as f64 / divisor;
    loop {
        let before = k.clone();
        let cutoff = k.max() / 20.0;
        for v in k.weights_mut() {
            if *v < cutoff {
                *v = 0.0;
            }
        }
        let comps = components(&k);
        let survivors: Vec<bool> = comps.iter().map(|c| c.len() as f64 >= min_area).collect();
        let keep: Vec<&Vec<usize>> = if survivors.iter().any(|&s| s) {
            comps
                .iter()
                .zip(&survivors)
                .filter(|(_, &s)| s)
                .map(|(c, _)| c)
                .collect()
        } else {
            // first of the largest, raster order
            let largest = comps.iter().map(Vec::len).max().unwrap_or(0);
            comps
                .iter()
                .filter(|c| c.len() == largest)
                .take(1)
                .collect()
        };
        let mut mask = vec![false; k.weights().len()];
        for c in keep {
            for &i in c {
                mask[i] = true;
            }
        }
        for (v, m) in k.weights_mut().iter_mut().zip(mask) {
            if !m {
                *v = 0.0;
            }
        }
        if k == before {
            break;
        }
    }
    k.normalize()?;
    Ok(k)
}

/// Circularly shifts the kernel so its centroid lands on the center cell.
pub fn align_kernel(kernel: &BlurKernel) -> BlurKernel {
    let n = kernel.size() as isize;
    let c = kernel.radius() as isize;
    let (cx, cy) = kernel.centroid();
    let (sx, sy) = (c - cx.round() as isize, c - cy.round() as isize);
    let mut out = BlurKernel::delta(kernel.size());
    for y in 0..n {
        for x in 0..n {
            let (tx, ty) = ((x + sx).rem_euclid(n), (y + sy).rem_euclid(n));
            out.set(tx as usize, ty as usize, kernel.get(x as usize, y as usize));
        }
    }
    out
}

/// [`align_kernel`] followed by a fractional bilinear shift of at most half
/// a cell that puts the centroid on the center. The centroid is exact
/// unless the integer shift wrapped mass across the border.
/// Deconvolving with a centered kernel leaves the image unshifted.
pub fn center_kernel(kernel: &BlurKernel) -> BlurKernel {
    let k = align_kernel(kernel);
    let c = k.radius() as f64;
    let (cx, cy) = k.centroid();
    let (fx, fy) = ((c - cx).clamp(-0.5, 0.5), (c - cy).clamp(-0.5, 0.5));
    let n = k.size() as isize;
    let mut out = BlurKernel::new(k.size(), vec![0.0; k.weights().len()]).expect("same size");
    let (ox, oy) = (fx.signum() as isize, fy.signum() as isize);
    let (ax, ay) = (fx.abs(), fy.abs());
    for y in 0..n {
        for x in 0..n {
            let w = k.get(x as usize, y as usize);
            for (dx, dy, f) in [
                (0, 0, (1.0 - ax) * (1.0 - ay)),
                (ox, 0, ax * (1.0 - ay)),
                (0, oy, (1.0 - ax) * ay),
                (ox, oy, ax * ay),
            ] {
                let (tx, ty) = (
                    (x + dx).rem_euclid(n) as usize,
                    (y + dy).rem_euclid(n) as usize,
                );
                out.set(tx, ty, out.get(tx, ty) + w * f);
            }
        }
    }
    out
}
