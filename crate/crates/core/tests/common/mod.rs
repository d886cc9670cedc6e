#![allow(dead_code)]

pub mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdeblur::imaging::PlanarImage;
use sdeblur::saliency::BinaryMask;
use sdeblur::BlurKernel;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(width: usize, height: usize, channels: usize, seed: u64) -> PlanarImage {
    let mut r = rng(seed);
    let data = (0..width * height * channels)
        .map(|_| r.gen::<f64>())
        .collect();
    PlanarImage::from_vec(width, height, channels, data).unwrap()
}

pub fn random_kernel(size: usize, seed: u64) -> BlurKernel {
    let mut r = rng(seed);
    BlurKernel::from_fn(size, |_, _| r.gen::<f64>())
        .unwrap()
        .normalized()
        .unwrap()
}

/// Literal `Σ_s K(s) · I(x − s)` with the sample lookup supplied by `at`.
pub fn direct_convolution(
    image: &PlanarImage,
    kernel: &BlurKernel,
    at: impl Fn(&PlanarImage, isize, isize) -> f64,
) -> PlanarImage {
    let r = kernel.radius() as isize;
    PlanarImage::from_fn(image.width(), image.height(), |x, y| {
        let mut acc = 0.0;
        for sy in -r..=r {
            for sx in -r..=r {
                let k = kernel.get((sx + r) as usize, (sy + r) as usize);
                acc += k * at(image, x as isize - sx, y as isize - sy);
            }
        }
        acc
    })
}

pub fn circular(image: &PlanarImage, kernel: &BlurKernel) -> PlanarImage {
    direct_convolution(image, kernel, |img, x, y| img.at_wrapped(x, y))
}

/// Pixels whose `radius` neighborhood holds a single mask value.
pub fn far_from_edges(mask: &BinaryMask, radius: usize) -> BinaryMask {
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    let r = radius as isize;
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        let v = mask.get(x, y);
        for dy in -r..=r {
            for dx in -r..=r {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h || mask.get(nx as usize, ny as usize) != v
                {
                    return false;
                }
            }
        }
        true
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
