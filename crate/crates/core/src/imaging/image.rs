use crate::error::{DeblurError, Result};

/// Real-valued pixel grid stored plane by plane (channel-major, each plane
/// row-major). Values are nominally in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl PlanarImage {
    pub fn new(width: usize, height: usize, channels: usize) -> Self {
        Self::filled(width, height, channels, 0.0)
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Self {
        Self {
            width,
            height,
            channels,
            data: vec![value; width * height * channels],
        }
    }

    pub fn from_vec(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height * channels {
            return Err(DeblurError::Dimension(format!(
                "{} values for a {}x{}x{} image",
                data.len(),
                width,
                height,
                channels
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Single-channel image from a per-pixel function of `(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            channels: 1,
            data,
        }
    }

    /// Stacks single-channel planes into one multi-channel image.
    pub fn from_planes(planes: &[PlanarImage]) -> Result<Self> {
        let first = planes
            .first()
            .ok_or_else(|| DeblurError::Dimension("no planes".into()))?;
        let mut data = Vec::with_capacity(first.len() * planes.len());
        for p in planes {
            p.ensure_gray()?;
            first.ensure_same_size(p)?;
            data.extend_from_slice(&p.data);
        }
        Ok(Self {
            width: first.width,
            height: first.height,
            channels: planes.len(),
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Pixels per plane.
    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.area();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.area();
        &mut self.data[c * n..(c + 1) * n]
    }

    /// Copies channel `c` out as a single-channel image.
    pub fn channel(&self, c: usize) -> PlanarImage {
        PlanarImage {
            width: self.width,
            height: self.height,
            channels: 1,
            data: self.plane(c).to_vec(),
        }
    }

    pub fn planes(&self) -> Vec<PlanarImage> {
        (0..self.channels).map(|c| self.channel(c)).collect()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[c * self.area() + y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: f64) {
        let n = self.area();
        self.data[c * n + y * self.width + x] = v;
    }

    /// First-channel sample; the usual accessor for grayscale grids.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Sample with coordinates clamped into the image.
    #[inline]
    pub fn at_clamped(&self, x: isize, y: isize) -> f64 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yc * self.width + xc]
    }

    /// Sample with coordinates wrapped periodically.
    #[inline]
    pub fn at_wrapped(&self, x: isize, y: isize) -> f64 {
        let xw = x.rem_euclid(self.width as isize) as usize;
        let yw = y.rem_euclid(self.height as isize) as usize;
        self.data[yw * self.width + xw]
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    pub fn ensure_gray(&self) -> Result<()> {
        self.ensure_channels(1)
    }

    pub fn ensure_channels(&self, expected: usize) -> Result<()> {
        if self.channels != expected {
            return Err(DeblurError::Channels {
                expected,
                got: self.channels,
            });
        }
        Ok(())
    }

    pub fn same_size(&self, other: &PlanarImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn ensure_same_size(&self, other: &PlanarImage) -> Result<()> {
        if !self.same_size(other) {
            return Err(DeblurError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        Ok(())
    }

    pub fn ensure_same_shape(&self, other: &PlanarImage) -> Result<()> {
        self.ensure_same_size(other)?;
        if self.channels != other.channels {
            return Err(DeblurError::Channels {
                expected: self.channels,
                got: other.channels,
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> PlanarImage {
        self.with_data(self.data.iter().map(|&v| f(v)).collect())
    }

    /// Elementwise combination of two images of identical shape.
    pub fn zip_map(&self, other: &PlanarImage, f: impl Fn(f64, f64) -> f64) -> Result<PlanarImage> {
        self.ensure_same_shape(other)?;
        Ok(self.with_data(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    /// Same shape, new samples. `data` must have the same length.
    pub(crate) fn with_data(&self, data: Vec<f64>) -> PlanarImage {
        debug_assert_eq!(data.len(), self.data.len());
        PlanarImage {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data,
        }
    }

    pub fn clamp01(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    pub fn clamped01(mut self) -> PlanarImage {
        self.clamp01();
        self
    }

    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sub-image with top-left corner `(x, y)`.
    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Result<PlanarImage> {
        if x + w > self.width || y + h > self.height || w == 0 || h == 0 {
            return Err(DeblurError::Dimension(format!(
                "crop {w}x{h}+{x}+{y} outside {}x{}",
                self.width, self.height
            )));
        }
        let mut out = PlanarImage::new(w, h, self.channels);
        for c in 0..self.channels {
            let src = self.plane(c);
            let dst = out.plane_mut(c);
            for row in 0..h {
                let s = (y + row) * self.width + x;
                dst[row * w..(row + 1) * w].copy_from_slice(&src[s..s + w]);
            }
        }
        Ok(out)
    }

    /// Rotates a quarter turn counter-clockwise: `(x, y) -> (y, width-1-x)`.
    pub fn rotate90(&self) -> PlanarImage {
        let (w, h) = (self.width, self.height);
        let mut out = PlanarImage::new(h, w, self.channels);
        for c in 0..self.channels {
            for y in 0..h {
                for x in 0..w {
                    out.set(y, w - 1 - x, c, self.get(x, y, c));
                }
            }
        }
        out
    }
}

/// Pair of per-pixel derivative grids.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientField {
    pub dx: PlanarImage,
    pub dy: PlanarImage,
}

impl GradientField {
    pub fn new(dx: PlanarImage, dy: PlanarImage) -> Result<Self> {
        dx.ensure_same_shape(&dy)?;
        Ok(Self { dx, dy })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            dx: PlanarImage::new(width, height, 1),
            dy: PlanarImage::new(width, height, 1),
        }
    }

    pub fn width(&self) -> usize {
        self.dx.width()
    }

    pub fn height(&self) -> usize {
        self.dx.height()
    }

    pub fn magnitude(&self) -> PlanarImage {
        self.dx
            .zip_map(&self.dy, |a, b| a.hypot(b))
            .expect("gradient components share a shape")
    }

    pub fn is_zero(&self) -> bool {
        self.dx
            .data()
            .iter()
            .chain(self.dy.data())
            .all(|&v| v == 0.0)
    }
}
