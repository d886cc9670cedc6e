use std::fmt::Write as _;
use std::path::Path;

use crate::error::{DeblurError, Result};

/// Square, odd-sized blur kernel (point spread function).
///
/// Weights are stored row-major; index `(size/2, size/2)` is the zero shift.
#[derive(Clone, Debug, PartialEq)]
pub struct BlurKernel {
    size: usize,
    weights: Vec<f64>,
}

impl BlurKernel {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size % 2 == 0 {
            return Err(DeblurError::Parameter(format!(
                "kernel size must be odd, got {size}"
            )));
        }
        if weights.len() != size * size {
            return Err(DeblurError::Dimension(format!(
                "{} weights for a {size}x{size} kernel",
                weights.len()
            )));
        }
        Ok(Self { size, weights })
    }

    /// Unit impulse at the center cell.
    pub fn delta(size: usize) -> Self {
        assert!(size % 2 == 1, "kernel size must be odd");
        let mut weights = vec![0.0; size * size];
        weights[size * size / 2] = 1.0;
        Self { size, weights }
    }

    /// Uniform `size x size` box, normalized.
    pub fn box_filter(size: usize) -> Self {
        assert!(size % 2 == 1, "kernel size must be odd");
        let w = 1.0 / (size * size) as f64;
        Self {
            size,
            weights: vec![w; size * size],
        }
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut weights = Vec::with_capacity(size * size);
        for y in 0..size {
            for x in 0..size {
                weights.push(f(x, y));
            }
        }
        Self::new(size, weights)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.weights[y * self.size + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.weights[y * self.size + x] = v;
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        self.weights.iter().all(|&w| w >= 0.0) && (self.sum() - 1.0).abs() <= tol
    }

    /// Scales weights to sum to one. Fails when no mass is left.
    pub fn normalize(&mut self) -> Result<()> {
        let s = self.sum();
        if !(s > 0.0) || !s.is_finite() {
            return Err(DeblurError::DegenerateKernel);
        }
        for w in &mut self.weights {
            *w /= s;
        }
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// Mass-weighted center `(cx, cy)` in cell coordinates.
    pub fn centroid(&self) -> (f64, f64) {
        let (mut sx, mut sy, mut s) = (0.0, 0.0, 0.0);
        for y in 0..self.size {
            for x in 0..self.size {
                let w = self.get(x, y);
                sx += w * x as f64;
                sy += w * y as f64;
                s += w;
            }
        }
        if s == 0.0 {
            let c = self.radius() as f64;
            return (c, c);
        }
        (sx / s, sy / s)
    }

    /// Embeds the kernel centered in a larger odd grid.
    pub fn padded_to(&self, size: usize) -> Self {
        assert!(size >= self.size && size % 2 == 1);
        let off = (size - self.size) / 2;
        let mut out = vec![0.0; size * size];
        for y in 0..self.size {
            for x in 0..self.size {
                out[(y + off) * size + x + off] = self.get(x, y);
            }
        }
        Self { size, weights: out }
    }

    /// Serializes as `ksize N` followed by `N` rows of `N` reals.
    pub fn to_text(&self) -> String {
        let mut s = format!("ksize {}\n", self.size);
        for row in self.weights.chunks(self.size) {
            let line: Vec<String> = row.iter().map(|w| format!("{w:.12e}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> std::result::Result<Self, String> {
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("ksize") => {}
            other => return Err(format!("expected `ksize` header, found {other:?}")),
        }
        let size: usize = tokens
            .next()
            .ok_or("missing kernel size")?
            .parse()
            .map_err(|e| format!("bad kernel size: {e}"))?;
        let weights = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| format!("bad weight {t:?}: {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(size, weights).map_err(|e| e.to_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DeblurError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text).map_err(|message| DeblurError::Format {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|source| DeblurError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
