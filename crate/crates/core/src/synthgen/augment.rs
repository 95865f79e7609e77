use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::raster::{LabelMask, RgbFrame};

/// Largest output raster `Scale` may produce, in pixels.
const MAX_SCALED_PIXELS: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    /// Clockwise quarter turn.
    Rotate90,
    Rotate180,
    Rotate270,
    FlipH,
    FlipV,
    /// Nearest-neighbour resize by a positive factor.
    Scale(f64),
    Brightness(i16),
    /// Gain around mid-gray 128.
    Contrast(f64),
}

impl Transform {
    pub fn is_geometric(&self) -> bool {
        !matches!(self, Transform::Brightness(_) | Transform::Contrast(_))
    }

    /// Draws a transform: a rotation, flip, 0.75–1.25 rescale, ±40
    /// brightness shift or 0.7–1.3 contrast gain.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        match rng.random_range(0..8) {
            0 => Transform::Rotate90,
            1 => Transform::Rotate180,
            2 => Transform::Rotate270,
            3 => Transform::FlipH,
            4 => Transform::FlipV,
            5 => Transform::Scale(rng.random_range(0.75..=1.25)),
            6 => Transform::Brightness(rng.random_range(-40..=40)),
            _ => Transform::Contrast(rng.random_range(0.7..=1.3)),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Rotate90 => write!(f, "rotate90"),
            Transform::Rotate180 => write!(f, "rotate180"),
            Transform::Rotate270 => write!(f, "rotate270"),
            Transform::FlipH => write!(f, "flip_h"),
            Transform::FlipV => write!(f, "flip_v"),
            Transform::Scale(k) => write!(f, "scale:{k}"),
            Transform::Brightness(d) => write!(f, "brightness:{d}"),
            Transform::Contrast(g) => write!(f, "contrast:{g}"),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParam(format!("unknown transform {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let t = match (name, arg) {
            ("rotate90", None) => Transform::Rotate90,
            ("rotate180", None) => Transform::Rotate180,
            ("rotate270", None) => Transform::Rotate270,
            ("flip_h", None) => Transform::FlipH,
            ("flip_v", None) => Transform::FlipV,
            ("scale", Some(a)) => Transform::Scale(a.parse().map_err(|_| bad())?),
            ("brightness", Some(a)) => Transform::Brightness(a.parse().map_err(|_| bad())?),
            ("contrast", Some(a)) => Transform::Contrast(a.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

/// Applies `transform` to a frame and its mask. Geometric transforms move
/// mask pixels exactly as frame pixels; photometric ones leave the mask as is.
pub fn augment(
    frame: &RgbFrame,
    mask: &LabelMask,
    transform: Transform,
) -> Result<(RgbFrame, LabelMask)> {
    if !mask.same_shape_as_frame(frame) {
        return Err(Error::DimensionMismatch {
            left_name: "frame",
            left_w: frame.width(),
            left_h: frame.height(),
            right_name: "mask",
            right_w: mask.width(),
            right_h: mask.height(),
        });
    }
    match transform {
        Transform::Brightness(delta) => {
            let pixels = frame
                .as_bytes()
                .iter()
                .map(|&v| (i16::from(v) + delta).clamp(0, 255) as u8)
                .collect();
            Ok((
                RgbFrame::new(frame.width(), frame.height(), pixels)?,
                mask.clone(),
            ))
        }
        Transform::Contrast(gain) => {
            if !gain.is_finite() {
                return Err(Error::InvalidParam(format!("contrast gain {gain}")));
            }
            let pixels = frame
                .as_bytes()
                .iter()
                .map(|&v| {
                    ((f64::from(v) - 128.0) * gain + 128.0)
                        .round()
                        .clamp(0.0, 255.0) as u8
                })
                .collect();
            Ok((
                RgbFrame::new(frame.width(), frame.height(), pixels)?,
                mask.clone(),
            ))
        }
        geometric => {
            let map = PixelMap::new(frame.width(), frame.height(), geometric)?;
            let pixels = map.apply(frame.as_bytes(), 3);
            let labels = map.apply(mask.labels(), 1);
            Ok((
                RgbFrame::new(map.out_w, map.out_h, pixels)?,
                LabelMask::new(map.out_w, map.out_h, labels, mask.class_count())?,
            ))
        }
    }
}

/// Output-to-source coordinate mapping of a geometric transform.
struct PixelMap {
    in_w: u32,
    in_h: u32,
    out_w: u32,
    out_h: u32,
    transform: Transform,
}

impl PixelMap {
    fn new(in_w: u32, in_h: u32, transform: Transform) -> Result<Self> {
        let (out_w, out_h) = match transform {
            Transform::Rotate90 | Transform::Rotate270 => (in_h, in_w),
            Transform::Scale(k) => {
                if !(k.is_finite() && k > 0.0) {
                    return Err(Error::InvalidParam(format!(
                        "scale factor {k} must be positive"
                    )));
                }
                let ow = (f64::from(in_w) * k).round().max(1.0);
                let oh = (f64::from(in_h) * k).round().max(1.0);
                if ow * oh > MAX_SCALED_PIXELS as f64 {
                    return Err(Error::InvalidParam(format!(
                        "scale factor {k} yields a {ow}x{oh} raster"
                    )));
                }
                (ow as u32, oh as u32)
            }
            _ => (in_w, in_h),
        };
        Ok(PixelMap {
            in_w,
            in_h,
            out_w,
            out_h,
            transform,
        })
    }

    fn source(&self, x: u32, y: u32) -> (u32, u32) {
        let (w, h) = (self.in_w, self.in_h);
        match self.transform {
            Transform::Rotate90 => (y, h - 1 - x),
            Transform::Rotate180 => (w - 1 - x, h - 1 - y),
            Transform::Rotate270 => (w - 1 - y, x),
            Transform::FlipH => (w - 1 - x, y),
            Transform::FlipV => (x, h - 1 - y),
            Transform::Scale(_) => {
                let sx = ((f64::from(x) + 0.5) * f64::from(w) / f64::from(self.out_w)) as u32;
                let sy = ((f64::from(y) + 0.5) * f64::from(h) / f64::from(self.out_h)) as u32;
                (sx.min(w - 1), sy.min(h - 1))
            }
            Transform::Brightness(_) | Transform::Contrast(_) => (x, y),
        }
    }

    fn apply(&self, src: &[u8], channels: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.out_w as usize * self.out_h as usize * channels);
        for y in 0..self.out_h {
            for x in 0..self.out_w {
                let (sx, sy) = self.source(x, y);
                let i = (sy as usize * self.in_w as usize + sx as usize) * channels;
                out.extend_from_slice(&src[i..i + channels]);
            }
        }
        out
    }
}

impl LabelMask {
    fn same_shape_as_frame(&self, frame: &RgbFrame) -> bool {
        self.width() == frame.width() && self.height() == frame.height()
    }
}
