use std::io::BufWriter;
use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};

use super::{ClassScheme, LabelMask, RgbFrame};
use crate::error::{Error, Result};

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn color_name(img: &DynamicImage) -> String {
    format!("{:?}", img.color())
}

/// Loads an 8-bit RGB PNG or binary PPM.
pub fn load_frame(path: &Path) -> Result<RgbFrame> {
    match decode(path)? {
        DynamicImage::ImageRgb8(buf) => {
            let (w, h) = buf.dimensions();
            RgbFrame::new(w, h, buf.into_raw())
        }
        other => Err(Error::PixelFormat {
            path: path.to_path_buf(),
            found: color_name(&other),
            expected: "8-bit RGB",
        }),
    }
}

/// Loads an 8-bit grayscale PNG whose values are raw class ids.
pub fn load_mask(path: &Path, scheme: &ClassScheme) -> Result<LabelMask> {
    match decode(path)? {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            LabelMask::new(w, h, buf.into_raw(), scheme.class_count())
        }
        other => Err(Error::PixelFormat {
            path: path.to_path_buf(),
            found: color_name(&other),
            expected: "8-bit grayscale",
        }),
    }
}

pub fn save_frame(frame: &RgbFrame, path: &Path) -> Result<()> {
    write_png(
        path,
        frame.as_bytes(),
        frame.width(),
        frame.height(),
        image::ExtendedColorType::Rgb8,
    )
}

pub fn save_mask(mask: &LabelMask, path: &Path) -> Result<()> {
    write_png(
        path,
        mask.labels(),
        mask.width(),
        mask.height(),
        image::ExtendedColorType::L8,
    )
}

fn write_png(
    path: &Path,
    bytes: &[u8],
    width: u32,
    height: u32,
    color: image::ExtendedColorType,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    image::write_buffer_with_format(&mut out, bytes, width, height, color, ImageFormat::Png)
        .map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    std::io::Write::flush(&mut out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.png");
        let frame = RgbFrame::new(2, 2, (0..12).map(|i| i * 20).collect()).unwrap();
        save_frame(&frame, &path).unwrap();
        let back = load_frame(&path).unwrap();
        assert_eq!(back, frame);
    }

    #[test]
    fn ppm_frame_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.ppm");
        let mut bytes = b"P6\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 250, 251, 252]);
        std::fs::write(&path, bytes).unwrap();
        let frame = load_frame(&path).unwrap();
        assert_eq!((frame.width(), frame.height()), (2, 1));
        assert_eq!(frame.as_bytes(), &[1, 2, 3, 250, 251, 252]);
    }

    #[test]
    fn truncated_png_fails_to_decode() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.png");
        let frame = RgbFrame::filled(16, 16, [9, 8, 7]).unwrap();
        save_frame(&frame, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(matches!(load_frame(&path), Err(Error::Decode { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_frame(Path::new("/nonexistent/x.png")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn gray_png_rejected_as_frame() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        let mask = LabelMask::new(2, 2, vec![0, 1, 2, 1], 3).unwrap();
        save_mask(&mask, &path).unwrap();
        assert!(matches!(load_frame(&path), Err(Error::PixelFormat { .. })));
    }

    #[test]
    fn mask_png_round_trip_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        let mask = LabelMask::new(2, 2, vec![0, 1, 2, 1], 3).unwrap();
        save_mask(&mask, &path).unwrap();
        let back = load_mask(&path, &ClassScheme::default()).unwrap();
        assert_eq!(back.labels(), &[0, 1, 2, 1]);
        assert_eq!(back, mask);
    }

    #[test]
    fn mask_with_unknown_class_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        let wide = LabelMask::new(2, 2, vec![7, 1, 2, 1], 8).unwrap();
        save_mask(&wide, &path).unwrap();
        let err = load_mask(&path, &ClassScheme::default()).unwrap_err();
        assert!(matches!(
            err,
            Error::UnknownClassId {
                value: 7,
                index: 0,
                ..
            }
        ));
        assert!(err.to_string().contains("unknown class id 7 at pixel 0"));
    }
}
