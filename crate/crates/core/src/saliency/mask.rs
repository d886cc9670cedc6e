use std::path::Path;

use crate::error::{DeblurError, Result};
use crate::imaging::{self, PlanarImage};

/// Per-pixel `{0, 1}` selection map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, false)
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self {
            width,
            height,
            bits: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    /// Bit is set where the first channel is at least one half.
    pub fn from_image(image: &PlanarImage) -> Self {
        Self::from_fn(image.width(), image.height(), |x, y| image.at(x, y) >= 0.5)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn intersects(&self, other: &BinaryMask) -> bool {
        self.bits.iter().zip(&other.bits).any(|(&a, &b)| a && b)
    }

    pub fn union(&self, other: &BinaryMask) -> Result<Self> {
        self.ensure_size(other.width, other.height)?;
        Ok(Self {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }

    pub fn ensure_size(&self, width: usize, height: usize) -> Result<()> {
        if (self.width, self.height) != (width, height) {
            return Err(DeblurError::Dimension(format!(
                "mask {}x{} vs image {width}x{height}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn ensure_matches(&self, image: &PlanarImage) -> Result<()> {
        self.ensure_size(image.width(), image.height())
    }

    /// Weight of pixel `i` as a real.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if self.bits[i] {
            1.0
        } else {
            0.0
        }
    }

    /// Dilation by a digital disk: offsets with `dx² + dy² <= (r + ½)²`.
    /// Radius 1 is the full 8-neighborhood.
    pub fn dilate(&self, radius: usize) -> Self {
        if radius == 0 {
            return self.clone();
        }
        let r = radius as isize;
        let limit = (radius as f64 + 0.5).powi(2);
        let offsets: Vec<(isize, isize)> = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .filter(|&(dx, dy)| ((dx * dx + dy * dy) as f64) <= limit)
            .collect();
        let (w, h) = (self.width as isize, self.height as isize);
        let mut out = Self::new(self.width, self.height);
        for y in 0..h {
            for x in 0..w {
                if !self.get(x as usize, y as usize) {
                    continue;
                }
                for &(dx, dy) in &offsets {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx >= 0 && ny >= 0 && nx < w && ny < h {
                        out.set(nx as usize, ny as usize, true);
                    }
                }
            }
        }
        out
    }

    pub fn to_image(&self) -> PlanarImage {
        PlanarImage::from_fn(self.width, self.height, |x, y| {
            if self.get(x, y) {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Loads a mask image; pixels at or above mid-gray are set.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let img = imaging::load(path)?;
        let gray = imaging::rgb_to_gray(&img)?;
        Ok(Self::from_image(&gray))
    }

    /// Saves as an image with values `{0, 255}` (PGM by extension).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        imaging::save(&self.to_image(), path)
    }
}

/// Axis-aligned rectangle; `(x, y)` is the top-left pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    /// Ordering used to pick among equal-area rectangles: smaller `y`, then
    /// smaller `x`, then the flatter one.
    fn tie_key(&self) -> (usize, usize, usize) {
        (self.y, self.x, self.h)
    }

    pub(crate) fn better_than(&self, other: &Rect) -> bool {
        self.area() > other.area()
            || (self.area() == other.area() && self.tie_key() < other.tie_key())
    }

    pub fn crop(&self, image: &PlanarImage) -> Result<PlanarImage> {
        image.crop(self.x, self.y, self.w, self.h)
    }
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} {}", self.x, self.y, self.w, self.h)
    }
}

/// Binarizes a saliency map against `threshold_scale x mean` and dilates
/// the salient part by a disk of `dilate_radius`.
///
/// An all-zero map yields an all-zero mask.
pub fn binarize_and_dilate(
    saliency: &PlanarImage,
    threshold_scale: f64,
    dilate_radius: usize,
) -> Result<BinaryMask> {
    saliency.ensure_gray()?;
    if !(threshold_scale > 0.0) {
        return Err(DeblurError::Parameter(format!(
            "threshold scale must be positive, got {threshold_scale}"
        )));
    }
    let (w, h) = (saliency.width(), saliency.height());
    if saliency.data().iter().all(|&v| v == 0.0) {
        return Ok(BinaryMask::new(w, h));
    }
    let threshold = threshold_scale * saliency.mean();
    let mask = BinaryMask::from_fn(w, h, |x, y| saliency.at(x, y) >= threshold);
    Ok(mask.dilate(dilate_radius))
}

/// Largest axis-aligned rectangle of zero bits with both sides at least
/// `min_side`, found with the row-histogram stack method.
///
/// Ties in area go to the smaller `y`, then the smaller `x`, then the
/// smaller height.
pub fn largest_background_rectangle(mask: &BinaryMask, min_side: usize) -> Result<Rect> {
    let (w, h) = (mask.width(), mask.height());
    let min_side = min_side.max(1);
    let mut heights = vec![0usize; w];
    let mut best: Option<Rect> = None;
    let mut stack: Vec<usize> = Vec::with_capacity(w + 1);
    for row in 0..h {
        for (x, hgt) in heights.iter_mut().enumerate() {
            *hgt = if mask.get(x, row) { 0 } else { *hgt + 1 };
        }
        stack.clear();
        for x in 0..=w {
            let cur = if x < w { heights[x] } else { 0 };
            while let Some(&top) = stack.last() {
                if heights[top] < cur {
                    break;
                }
                stack.pop();
                let bar = heights[top];
                // equal bars are reported by the last one popped
                if bar == cur && x < w {
                    continue;
                }
                let left = stack.last().map_or(0, |&s| s + 1);
                let cand = Rect::new(left, row + 1 - bar.max(1), x - left, bar);
                if bar >= min_side
                    && cand.w >= min_side
                    && best.map_or(true, |b| cand.better_than(&b))
                {
                    best = Some(cand);
                }
            }
            stack.push(x);
        }
    }
    best.ok_or_else(|| {
        DeblurError::BackgroundTooSmall(format!(
            "no background rectangle of at least {min_side}x{min_side} in a {w}x{h} mask"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_an_involution() {
        let m = BinaryMask::from_fn(5, 4, |x, y| (x * y) % 3 == 1);
        assert_eq!(m.complement().complement(), m);
    }

    #[test]
    fn zero_map_gives_empty_mask() {
        let s = PlanarImage::new(9, 9, 1);
        assert!(binarize_and_dilate(&s, 2.0, 3).unwrap().is_empty());
    }

    #[test]
    fn single_peak_dilates_to_a_block() {
        let mut s = PlanarImage::new(9, 9, 1);
        s.set(4, 4, 0, 1.0);
        let m = binarize_and_dilate(&s, 2.0, 1).unwrap();
        for y in 0..9 {
            for x in 0..9 {
                let inside = (3..=5).contains(&x) && (3..=5).contains(&y);
                assert_eq!(m.get(x, y), inside, "({x},{y})");
            }
        }
    }

    #[test]
    fn uniform_map_below_scaled_mean() {
        let s = PlanarImage::filled(6, 6, 1, 0.5);
        assert!(binarize_and_dilate(&s, 2.0, 2).unwrap().is_empty());
        assert!(binarize_and_dilate(&s, 0.0, 2).is_err());
    }

    #[test]
    fn whole_background() {
        let m = BinaryMask::new(10, 10);
        assert_eq!(
            largest_background_rectangle(&m, 1).unwrap(),
            Rect::new(0, 0, 10, 10)
        );
    }

    #[test]
    fn center_hole_tie_break() {
        let mut m = BinaryMask::new(3, 3);
        m.set(1, 1, true);
        assert_eq!(
            largest_background_rectangle(&m, 1).unwrap(),
            Rect::new(0, 0, 3, 1)
        );
    }

    #[test]
    fn too_small_background() {
        let m = BinaryMask::filled(6, 6, true);
        assert!(matches!(
            largest_background_rectangle(&m, 1),
            Err(DeblurError::BackgroundTooSmall(_))
        ));
        let mut m = BinaryMask::filled(8, 8, true);
        for x in 0..8 {
            m.set(x, 3, false);
        }
        assert!(largest_background_rectangle(&m, 1).is_ok());
        assert!(largest_background_rectangle(&m, 2).is_err());
    }

    #[test]
    fn min_side_prefers_a_square_over_a_strip() {
        // background: row 1 plus a 4-wide block below it; the 20x1 strip and
        // the 4x5 block tie on area and the flatter strip wins
        let m = BinaryMask::from_fn(20, 6, |x, y| !(y == 1 || (x < 4 && y >= 2)));
        assert_eq!(
            largest_background_rectangle(&m, 1).unwrap(),
            Rect::new(0, 1, 20, 1)
        );
        assert_eq!(
            largest_background_rectangle(&m, 4).unwrap(),
            Rect::new(0, 1, 4, 5)
        );
    }
}
