use super::image::PlanarImage;
use crate::error::Result;

/// Derivative operators built from forward differences `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Derivative {
    D0,
    Dx,
    Dy,
    Dxx,
    Dyy,
    Dxy,
}

impl Derivative {
    pub const ALL: [Derivative; 6] = [
        Derivative::D0,
        Derivative::Dx,
        Derivative::Dy,
        Derivative::Dxx,
        Derivative::Dyy,
        Derivative::Dxy,
    ];

    /// Convolution taps `(dx, dy, weight)` of the operator.
    pub fn taps(self) -> Vec<(isize, isize, f64)> {
        match self {
            Derivative::D0 => vec![(0, 0, 1.0)],
            Derivative::Dx => vec![(0, 0, -1.0), (-1, 0, 1.0)],
            Derivative::Dy => vec![(0, 0, -1.0), (0, -1, 1.0)],
            Derivative::Dxx => vec![(0, 0, 1.0), (-1, 0, -2.0), (-2, 0, 1.0)],
            Derivative::Dyy => vec![(0, 0, 1.0), (0, -1, -2.0), (0, -2, 1.0)],
            Derivative::Dxy => vec![(0, 0, 1.0), (-1, 0, -1.0), (0, -1, -1.0), (-1, -1, 1.0)],
        }
    }
}

/// How forward differences treat the last row/column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMode {
    /// The sample past the edge repeats the edge (difference is zero there).
    Replicate,
    /// The sample past the edge wraps around.
    Periodic,
}

fn diff(image: &PlanarImage, horizontal: bool, edge: EdgeMode) -> PlanarImage {
    let (w, h) = (image.width(), image.height());
    let mut out = PlanarImage::new(w, h, 1);
    let src = image.plane(0);
    let dst = out.plane_mut(0);
    for y in 0..h {
        for x in 0..w {
            let (nx, ny) = if horizontal { (x + 1, y) } else { (x, y + 1) };
            let next = match edge {
                EdgeMode::Replicate => src[ny.min(h - 1) * w + nx.min(w - 1)],
                EdgeMode::Periodic => src[(ny % h) * w + nx % w],
            };
            dst[y * w + x] = next - src[y * w + x];
        }
    }
    out
}

/// Applies `which` with replicate boundary. Single-channel input only.
pub fn derivative(image: &PlanarImage, which: Derivative) -> Result<PlanarImage> {
    derivative_with(image, which, EdgeMode::Replicate)
}

pub fn derivative_with(
    image: &PlanarImage,
    which: Derivative,
    edge: EdgeMode,
) -> Result<PlanarImage> {
    image.ensure_gray()?;
    Ok(match which {
        Derivative::D0 => image.clone(),
        Derivative::Dx => diff(image, true, edge),
        Derivative::Dy => diff(image, false, edge),
        Derivative::Dxx => diff(&diff(image, true, edge), true, edge),
        Derivative::Dyy => diff(&diff(image, false, edge), false, edge),
        Derivative::Dxy => diff(&diff(image, true, edge), false, edge),
    })
}
