use std::fmt::Write as _;
use std::path::Path;

use crate::error::{DeblurError, Result};
use crate::imaging::{BlurKernel, PlanarImage};

/// One estimation iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub scale: usize,
    pub iter: usize,
    pub lambda: f64,
    pub alpha: f64,
    /// Kernel energy of the new kernel.
    pub fk_energy: f64,
    /// Kernel energy of the previous kernel against the same gradients.
    pub fk_energy_prev: f64,
    /// Deconvolution objective of the new latent estimate.
    pub fl_energy: f64,
}

/// Optional per-iteration output of the estimation loop.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub trace: Vec<TraceRow>,
    /// Kernel after every iteration, coarse to fine.
    pub kernels: Vec<BlurKernel>,
    /// Last predicted latent image of every scale.
    pub predictions: Vec<PlanarImage>,
    /// `−λ·trace(TH)` of the last prediction.
    pub edge_map: Option<PlanarImage>,
}

impl Diagnostics {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("scale,iter,lambda,alpha,fK_energy,fL_energy\n");
        for r in &self.trace {
            let _ = writeln!(
                s,
                "{},{},{:.10},{:.10},{:.10e},{:.10e}",
                r.scale, r.iter, r.lambda, r.alpha, r.fk_energy, r.fl_energy
            );
        }
        s
    }

    pub fn write_trace(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.trace_csv()).map_err(|source| DeblurError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Tiles all iteration kernels into one gray image, each scaled by its
    /// maximum and magnified `zoom` times.
    pub fn kernel_montage(&self, zoom: usize) -> Option<PlanarImage> {
        let cell = self.kernels.iter().map(BlurKernel::size).max()? * zoom + 2;
        let cols = (self.kernels.len() as f64).sqrt().ceil() as usize;
        let rows = self.kernels.len().div_ceil(cols);
        let mut out = PlanarImage::new(cols * cell, rows * cell, 1);
        for (i, k) in self.kernels.iter().enumerate() {
            let (ox, oy) = ((i % cols) * cell + 1, (i / cols) * cell + 1);
            let max = k.max().max(f64::MIN_POSITIVE);
            for y in 0..k.size() * zoom {
                for x in 0..k.size() * zoom {
                    out.set(ox + x, oy + y, 0, k.get(x / zoom, y / zoom) / max);
                }
            }
        }
        Some(out)
    }
}

/// Magnitude of an edge map scaled to `[0, 1]` for display.
pub fn edge_map_image(edge_map: &PlanarImage) -> PlanarImage {
    let max = edge_map.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return edge_map.map(|_| 0.0);
    }
    edge_map.map(|v| v.abs() / max)
}
