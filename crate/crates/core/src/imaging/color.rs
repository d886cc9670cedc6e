use super::image::PlanarImage;
use crate::error::Result;

/// Luma with Rec. 601 weights. Single-channel input is returned as is.
pub fn rgb_to_gray(image: &PlanarImage) -> Result<PlanarImage> {
    if image.is_gray() {
        return Ok(image.clone());
    }
    image.ensure_channels(3)?;
    let (r, g, b) = (image.plane(0), image.plane(1), image.plane(2));
    let data = (0..image.area())
        .map(|i| 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i])
        .collect();
    PlanarImage::from_vec(image.width(), image.height(), 1, data)
}

/// Replicates a gray plane into three channels.
pub fn gray_to_rgb(image: &PlanarImage) -> Result<PlanarImage> {
    image.ensure_gray()?;
    PlanarImage::from_planes(&[image.clone(), image.clone(), image.clone()])
}

fn srgb_to_linear(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

// sRGB primaries, D65 white
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

/// CIE L*a*b* (D65) of an sRGB pixel with components in `[0, 1]`.
pub fn srgb_pixel_to_lab(rgb: [f64; 3]) -> [f64; 3] {
    let lin = rgb.map(srgb_to_linear);
    let mut xyz = [0.0; 3];
    for (row, out) in RGB_TO_XYZ.iter().zip(xyz.iter_mut()) {
        *out = row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2];
    }
    // white point as the image of (1, 1, 1) keeps the neutral axis exact
    let white: [f64; 3] = RGB_TO_XYZ.map(|row| row.iter().sum());
    let fx = lab_f(xyz[0] / white[0]);
    let fy = lab_f(xyz[1] / white[1]);
    let fz = lab_f(xyz[2] / white[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Converts a 3-channel sRGB image to L*a*b* planes.
pub fn rgb_to_lab(image: &PlanarImage) -> Result<PlanarImage> {
    image.ensure_channels(3)?;
    let mut out = PlanarImage::new(image.width(), image.height(), 3);
    let n = image.area();
    for i in 0..n {
        let lab = srgb_pixel_to_lab([image.plane(0)[i], image.plane(1)[i], image.plane(2)[i]]);
        for (c, v) in lab.into_iter().enumerate() {
            out.plane_mut(c)[i] = v;
        }
    }
    Ok(out)
}
