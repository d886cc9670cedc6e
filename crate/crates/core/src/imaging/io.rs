use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder};

use super::image::PlanarImage;
use crate::error::{DeblurError, Result};

fn format_error(path: &Path, message: impl ToString) -> DeblurError {
    DeblurError::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> DeblurError {
    DeblurError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FileKind {
    Png,
    Pnm,
}

fn kind_of(path: &Path) -> Result<FileKind> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "png" => Ok(FileKind::Png),
        "pgm" | "ppm" | "pnm" => Ok(FileKind::Pnm),
        _ => Err(format_error(
            path,
            format!("unsupported image format {ext:?}"),
        )),
    }
}

/// Reads an 8-bit PNG, PGM or PPM file. Gray files load as one channel,
/// everything else as RGB (alpha is dropped).
pub fn load(path: impl AsRef<Path>) -> Result<PlanarImage> {
    let path = path.as_ref();
    kind_of(path)?;
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    let decoded = image::load_from_memory(&bytes).map_err(|e| format_error(path, e))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let gray = matches!(
        decoded,
        DynamicImage::ImageLuma8(_)
            | DynamicImage::ImageLuma16(_)
            | DynamicImage::ImageLumaA8(_)
            | DynamicImage::ImageLumaA16(_)
    );
    if gray {
        let buf = decoded.to_luma8();
        let data = buf.as_raw().iter().map(|&v| v as f64 / 255.0).collect();
        PlanarImage::from_vec(w, h, 1, data)
    } else {
        let buf = decoded.to_rgb8();
        let raw = buf.as_raw();
        let mut out = PlanarImage::new(w, h, 3);
        for c in 0..3 {
            let plane = out.plane_mut(c);
            for (i, v) in plane.iter_mut().enumerate() {
                *v = raw[i * 3 + c] as f64 / 255.0;
            }
        }
        Ok(out)
    }
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Interleaved 8-bit samples of a 1- or 3-channel image.
pub fn to_bytes(image: &PlanarImage) -> Result<Vec<u8>> {
    match image.channels() {
        1 => Ok(image.plane(0).iter().map(|&v| quantize(v)).collect()),
        3 => {
            let n = image.area();
            let mut out = Vec::with_capacity(n * 3);
            for i in 0..n {
                for c in 0..3 {
                    out.push(quantize(image.plane(c)[i]));
                }
            }
            Ok(out)
        }
        got => Err(DeblurError::Channels { expected: 3, got }),
    }
}

/// Writes an 8-bit image; the format follows the file extension.
pub fn save(image: &PlanarImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let kind = kind_of(path)?;
    let bytes = to_bytes(image)?;
    let (w, h) = (image.width() as u32, image.height() as u32);
    let color = if image.is_gray() {
        ExtendedColorType::L8
    } else {
        ExtendedColorType::Rgb8
    };
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let writer = BufWriter::new(file);
    let result = match kind {
        FileKind::Png => PngEncoder::new(writer).write_image(&bytes, w, h, color),
        FileKind::Pnm => {
            let subtype = if image.is_gray() {
                PnmSubtype::Graymap(SampleEncoding::Binary)
            } else {
                PnmSubtype::Pixmap(SampleEncoding::Binary)
            };
            PnmEncoder::new(writer)
                .with_subtype(subtype)
                .write_image(&bytes, w, h, color)
        }
    };
    result.map_err(|e| format_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsupported_extension_names_the_path() {
        let err = load("/nonexistent/picture.tiff").unwrap_err();
        assert!(err.to_string().contains("picture.tiff"));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load("/nonexistent/a.png"),
            Err(DeblurError::Io { .. })
        ));
    }

    #[test]
    fn round_trip_formats() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = 17u64;
        let gray = PlanarImage::from_fn(9, 6, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            (s >> 40) as f64 / (1u64 << 24) as f64
        });
        let rgb =
            PlanarImage::from_planes(&[gray.clone(), gray.map(|v| 1.0 - v), gray.map(|v| v * 0.5)])
                .unwrap();
        for (img, name) in [
            (&gray, "g.png"),
            (&gray, "g.pgm"),
            (&rgb, "c.png"),
            (&rgb, "c.ppm"),
        ] {
            let p = dir.path().join(name);
            save(img, &p).unwrap();
            let back = load(&p).unwrap();
            assert_eq!(back.channels(), img.channels());
            for (a, b) in img.data().iter().zip(back.data()) {
                assert!((a - b).abs() <= 1.0 / 255.0, "{name}");
            }
        }
    }
}
