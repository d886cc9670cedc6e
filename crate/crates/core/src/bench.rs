//! Ground-truth generation and quality metrics.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{DeblurError, Result};
use crate::imaging::{
    convolve, gray_to_rgb, rgb_to_gray, BlurKernel, ConvMode, Padding, PlanarImage,
};
use crate::kernel_est::align_kernel;
use crate::saliency::BinaryMask;

/// Root mean squared difference over all channels, optionally restricted
/// to the pixels set in `mask`. An empty mask yields zero.
pub fn rmse(a: &PlanarImage, b: &PlanarImage, mask: Option<&BinaryMask>) -> Result<f64> {
    a.ensure_same_shape(b)?;
    if let Some(m) = mask {
        m.ensure_size(a.width(), a.height())?;
    }
    let area = a.area();
    let (mut sum, mut count) = (0.0, 0usize);
    for c in 0..a.channels() {
        for (i, (x, y)) in a.plane(c).iter().zip(b.plane(c)).enumerate() {
            if mask.map_or(true, |m| m.bits()[i % area]) {
                sum += (x - y).powi(2);
                count += 1;
            }
        }
    }
    Ok(if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    })
}

/// Normalized cross-correlation of two kernels after centroid alignment,
/// zero-padded to a common size. Identical shapes score one.
pub fn kernel_ncc(estimate: &BlurKernel, truth: &BlurKernel) -> f64 {
    let size = estimate.size().max(truth.size());
    let a = align_kernel(&estimate.padded_to(size));
    let b = align_kernel(&truth.padded_to(size));
    let n = (size * size) as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a.weights().iter().zip(b.weights()) {
        let (x, y) = (x - ma, y - mb);
        ab += x * y;
        aa += x * x;
        bb += y * y;
    }
    if aa == 0.0 || bb == 0.0 {
        return if aa == bb { 1.0 } else { 0.0 };
    }
    ab / (aa * bb).sqrt()
}

/// Shape of a synthetic blur kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelFamily {
    /// Motion segment of `length` pixels at `angle` degrees (counter-clockwise
    /// from the x axis, y pointing down the image).
    Line {
        length: f64,
        angle: f64,
    },
    Gaussian {
        sigma: f64,
    },
    Disk {
        radius: f64,
    },
}

impl KernelFamily {
    /// Smallest odd side holding the whole shape.
    pub fn default_size(&self) -> usize {
        let odd = |v: f64| {
            let n = v.ceil().max(1.0) as usize;
            n | 1
        };
        match *self {
            KernelFamily::Line { length, .. } => odd(length),
            KernelFamily::Gaussian { sigma } => 2 * (3.0 * sigma).ceil() as usize + 1,
            KernelFamily::Disk { radius } => 2 * radius.ceil() as usize + 1,
        }
    }
}

impl FromStr for KernelFamily {
    type Err = String;

    /// Parses `line:LEN:DEG`, `gaussian:SIGMA` or `disk:RADIUS`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> std::result::Result<f64, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("kernel spec `{s}` is missing a field"))?
                .parse::<f64>()
                .map_err(|e| format!("kernel spec `{s}`: {e}"))
        };
        let (family, arity) = match parts[0] {
            "line" => (
                KernelFamily::Line {
                    length: num(1)?,
                    angle: num(2)?,
                },
                3,
            ),
            "gaussian" => (KernelFamily::Gaussian { sigma: num(1)? }, 2),
            "disk" => (KernelFamily::Disk { radius: num(1)? }, 2),
            other => return Err(format!("unknown kernel family `{other}`")),
        };
        if parts.len() != arity {
            return Err(format!(
                "kernel spec `{s}` has {} fields, expected {arity}",
                parts.len()
            ));
        }
        Ok(family)
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelFamily::Line { length, angle } => write!(f, "line:{length}:{angle}"),
            KernelFamily::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            KernelFamily::Disk { radius } => write!(f, "disk:{radius}"),
        }
    }
}

/// Recipe for a synthetic blurry image.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub family: KernelFamily,
    /// Kernel side; defaults to [`KernelFamily::default_size`].
    pub size: Option<usize>,
    /// Standard deviation of the additive Gaussian noise.
    pub noise: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(family: KernelFamily, noise: f64, seed: u64) -> Self {
        Self {
            family,
            size: None,
            noise,
            seed,
        }
    }

    pub fn kernel_size(&self) -> usize {
        self.size.unwrap_or_else(|| self.family.default_size())
    }
}

/// Rasterizes the kernel of `spec`, normalized to unit sum.
pub fn synth_kernel(spec: &SynthSpec) -> Result<BlurKernel> {
    let size = spec.kernel_size();
    if size % 2 == 0 {
        return Err(DeblurError::Parameter(format!(
            "kernel size must be odd, got {size}"
        )));
    }
    let c = (size / 2) as f64;
    let k = match spec.family {
        KernelFamily::Line { length, angle } => {
            if !(length >= 1.0) {
                return Err(DeblurError::Parameter(format!(
                    "line length must be at least 1, got {length}"
                )));
            }
            let (sin, cos) = angle.to_radians().sin_cos();
            let half = (length - 1.0) / 2.0;
            if half * cos.abs() > c + 1e-9 || half * sin.abs() > c + 1e-9 {
                return Err(DeblurError::Parameter(format!(
                    "line of length {length} does not fit a {size}x{size} kernel"
                )));
            }
            let mut k = BlurKernel::new(size, vec![0.0; size * size])?;
            // Samples symmetric about the center, splatted bilinearly.
            let steps = (8.0 * length).ceil() as usize;
            for i in 0..=steps {
                let t = if steps == 0 {
                    0.0
                } else {
                    -half + 2.0 * half * i as f64 / steps as f64
                };
                splat(&mut k, c + t * cos, c - t * sin);
            }
            k
        }
        KernelFamily::Gaussian { sigma } => {
            if !(sigma > 0.0) {
                return Err(DeblurError::Parameter(format!(
                    "gaussian sigma must be positive, got {sigma}"
                )));
            }
            BlurKernel::from_fn(size, |x, y| {
                let (dx, dy) = (x as f64 - c, y as f64 - c);
                (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
            })?
        }
        KernelFamily::Disk { radius } => {
            if !(radius >= 0.0) || radius > c + 0.5 {
                return Err(DeblurError::Parameter(format!(
                    "disk radius {radius} does not fit a {size}x{size} kernel"
                )));
            }
            const SUB: usize = 8;
            BlurKernel::from_fn(size, |x, y| {
                let mut inside = 0usize;
                for sy in 0..SUB {
                    for sx in 0..SUB {
                        let dx = x as f64 - c + (sx as f64 + 0.5) / SUB as f64 - 0.5;
                        let dy = y as f64 - c + (sy as f64 + 0.5) / SUB as f64 - 0.5;
                        inside += usize::from(dx * dx + dy * dy <= radius * radius);
                    }
                }
                let center = x as f64 == c && y as f64 == c;
                if center {
                    inside.max(1) as f64
                } else {
                    inside as f64
                }
            })?
        }
    };
    k.normalized()
}

fn splat(k: &mut BlurKernel, x: f64, y: f64) {
    let (x0, y0) = (x.floor(), y.floor());
    let (fx, fy) = (x - x0, y - y0);
    let n = k.size() as isize;
    for (dx, dy, w) in [
        (0, 0, (1.0 - fx) * (1.0 - fy)),
        (1, 0, fx * (1.0 - fy)),
        (0, 1, (1.0 - fx) * fy),
        (1, 1, fx * fy),
    ] {
        let (xi, yi) = (x0 as isize + dx, y0 as isize + dy);
        if w > 0.0 && (0..n).contains(&xi) && (0..n).contains(&yi) {
            let (xi, yi) = (xi as usize, yi as usize);
            k.set(xi, yi, k.get(xi, yi) + w);
        }
    }
}

/// `kernel ⊗ sharp` plus seeded Gaussian noise, clamped to `[0, 1]`.
pub fn synth_blur(sharp: &PlanarImage, spec: &SynthSpec) -> Result<(PlanarImage, BlurKernel)> {
    let kernel = synth_kernel(spec)?;
    let blurred = convolve(sharp, &kernel, ConvMode::Fft, Padding::Replicate)?;
    Ok((add_noise(&blurred, spec.noise, spec.seed)?, kernel))
}

/// Adds seeded Gaussian noise and clamps; `sigma = 0` returns the input.
pub fn add_noise(image: &PlanarImage, sigma: f64, seed: u64) -> Result<PlanarImage> {
    if sigma == 0.0 {
        return Ok(image.clone());
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| DeblurError::Parameter(format!("noise sigma {sigma}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = image.clone();
    for v in out.data_mut() {
        *v = (*v + normal.sample(&mut rng)).clamp(0.0, 1.0);
    }
    Ok(out)
}

/// Seeded piecewise-smooth test scene: overlapping rectangles, disks, bars
/// and striped ellipses of random color over a soft gradient.
pub fn test_scene(width: usize, height: usize, channels: usize, seed: u64) -> Result<PlanarImage> {
    if channels != 1 && channels != 3 {
        return Err(DeblurError::Channels {
            expected: 3,
            got: channels,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = PlanarImage::new(width, height, channels);
    let base: Vec<f64> = (0..channels).map(|_| rng.gen_range(0.3..0.6)).collect();
    for c in 0..channels {
        for y in 0..height {
            for x in 0..width {
                let t = (x + y) as f64 / (width + height) as f64;
                img.set(x, y, c, base[c] + 0.15 * (t - 0.5));
            }
        }
    }
    let (w, h) = (width as f64, height as f64);
    let shapes = 6 + (width * height) / 512;
    for _ in 0..shapes {
        let color: Vec<f64> = (0..channels).map(|_| rng.gen_range(0.05..0.95)).collect();
        let alt: Vec<f64> = (0..channels).map(|_| rng.gen_range(0.05..0.95)).collect();
        let period = rng.gen_range(3.0..9.0);
        let kind = rng.gen_range(0..4);
        let (cx, cy) = (rng.gen_range(0.0..w), rng.gen_range(0.0..h));
        let (a, b) = (rng.gen_range(0.02..0.12) * w, rng.gen_range(0.02..0.12) * h);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let (s, co) = theta.sin_cos();
        for y in 0..height {
            for x in 0..width {
                let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
                let (u, v) = (dx * co + dy * s, -dx * s + dy * co);
                let inside = match kind {
                    0 => dx.abs() <= a && dy.abs() <= b,
                    1 | 3 => (dx / a).powi(2) + (dy / b).powi(2) <= 1.0,
                    _ => u.abs() <= a && v.abs() <= 0.15 * b + 1.0,
                };
                if inside {
                    let striped = kind == 3 && (u / period).floor().rem_euclid(2.0) == 1.0;
                    let fill = if striped { &alt } else { &color };
                    for (ch, &col) in fill.iter().enumerate() {
                        img.set(x, y, ch, col);
                    }
                }
            }
        }
    }
    Ok(img)
}

/// A constructed spatially-variant test case with its ground truth.
#[derive(Clone, Debug)]
pub struct Composite {
    pub blurry: PlanarImage,
    pub sharp: PlanarImage,
    /// Region masks; see the constructor for their meaning.
    pub masks: Vec<BinaryMask>,
    /// True kernel per blurred region.
    pub kernels: Vec<BlurKernel>,
}

/// Copies `src` into `dst` wherever `mask` is set.
fn paste(dst: &mut PlanarImage, src: &PlanarImage, mask: &BinaryMask) {
    for c in 0..dst.channels() {
        for y in 0..dst.height() {
            for x in 0..dst.width() {
                if mask.get(x, y) {
                    dst.set(x, y, c, src.get(x, y, c));
                }
            }
        }
    }
}

fn square_mask(width: usize, height: usize, x0: usize, y0: usize, side: usize) -> BinaryMask {
    BinaryMask::from_fn(width, height, |x, y| {
        (x0..x0 + side).contains(&x) && (y0..y0 + side).contains(&y)
    })
}

/// 192×192 scene: a sharp red-dominant 64×64 patch at (112, 16) over a
/// muted gray background blurred by a 9×9 line at 45°. `masks[0]` is the
/// sharp patch, `kernels[0]` the background blur.
pub fn salient_composite(seed: u64) -> Result<Composite> {
    let (w, h, side, (fx, fy)) = (192, 192, 64, (112, 16));
    let gray = rgb_to_gray(&test_scene(w, h, 3, seed)?)?.map(|v| 0.15 + 0.7 * v);
    let background = gray_to_rgb(&gray)?;
    let t = test_scene(side, side, 3, seed + 1)?;
    let red = PlanarImage::from_planes(&[
        t.channel(0).map(|v| 0.6 + 0.4 * v),
        t.channel(1).map(|v| 0.25 * v),
        t.channel(2).map(|v| 0.25 * v),
    ])?;
    let mut patch = PlanarImage::new(w, h, 3);
    for c in 0..3 {
        for y in 0..side {
            for x in 0..side {
                patch.set(fx + x, fy + y, c, red.get(x, y, c));
            }
        }
    }
    let fg = square_mask(w, h, fx, fy, side);
    let line = KernelFamily::Line {
        length: 9.0,
        angle: 45.0,
    };
    let (mut blurry, kernel) = synth_blur(&background, &SynthSpec::new(line, 0.0, seed))?;
    let mut sharp = background;
    paste(&mut sharp, &patch, &fg);
    paste(&mut blurry, &patch, &fg);
    Ok(Composite {
        blurry,
        sharp,
        masks: vec![fg],
        kernels: vec![kernel],
    })
}

/// 288×288 scene with two 128×128 regions blurred by 9×9 lines at 0° (A,
/// top left) and 90° (B, bottom right) over a sharp background. `masks`
/// are the two regions.
pub fn two_region_composite(seed: u64) -> Result<Composite> {
    let (w, h) = (288, 288);
    let sharp = test_scene(w, h, 3, seed)?.map(|v| 0.15 + 0.7 * v);
    let masks = vec![
        square_mask(w, h, 8, 8, 128),
        square_mask(w, h, 152, 152, 128),
    ];
    let mut blurry = sharp.clone();
    let mut kernels = Vec::new();
    for (mask, angle) in masks.iter().zip([0.0, 90.0]) {
        let line = KernelFamily::Line { length: 9.0, angle };
        let (b, k) = synth_blur(&sharp, &SynthSpec::new(line, 0.0, seed))?;
        paste(&mut blurry, &b, mask);
        kernels.push(k);
    }
    Ok(Composite {
        blurry,
        sharp,
        masks,
        kernels,
    })
}

/// One row of a benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    pub image_id: String,
    pub width: usize,
    pub height: usize,
    pub ksize: usize,
    pub rmse_blurry: f64,
    pub rmse_deblurred: f64,
    /// Present when both the true and the estimated kernel are known.
    pub kernel_ncc: Option<f64>,
    /// Wall-clock time of the deblurring call, when it was measured.
    pub seconds: Option<f64>,
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|source| DeblurError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
