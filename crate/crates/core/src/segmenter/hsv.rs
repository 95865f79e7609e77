use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{ClassScheme, LabelMask, RgbFrame, BACKGROUND, SOIL, STRAW};

/// Hue, saturation and value of an 8-bit RGB pixel.
///
/// Hue is in degrees `[0, 360)` and 0 for gray pixels. Saturation and value
/// are on the 0–255 scale: `s = (max - min) / max * 255`, `v = max`.
pub fn rgb_to_hsv([r, g, b]: [u8; 3]) -> (f64, f64, f64) {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let hue = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let saturation = if max == 0.0 { 0.0 } else { delta / max * 255.0 };
    (hue, saturation, max)
}

/// Arc of the hue circle from `start` (inclusive) to `end`. When
/// `start > end` the arc wraps through 0°.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HueInterval {
    pub start: f64,
    pub end: f64,
    #[serde(default)]
    pub end_inclusive: bool,
}

impl HueInterval {
    pub fn closed(start: f64, end: f64) -> Self {
        HueInterval {
            start,
            end,
            end_inclusive: true,
        }
    }

    pub fn half_open(start: f64, end: f64) -> Self {
        HueInterval {
            start,
            end,
            end_inclusive: false,
        }
    }

    pub fn contains(&self, hue: f64) -> bool {
        let below_end = hue < self.end || (self.end_inclusive && hue == self.end);
        if self.start <= self.end {
            hue >= self.start && below_end
        } else {
            hue >= self.start || below_end
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let ok = |d: f64| d.is_finite() && (0.0..=360.0).contains(&d);
        if !ok(self.start) || !ok(self.end) {
            return Err(Error::InvalidParam(format!(
                "{what} hue interval [{}, {}] outside 0..=360 degrees",
                self.start, self.end
            )));
        }
        Ok(())
    }
}

/// Colour rules of the model-free baseline. Straw is tested before soil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThresholdParams {
    pub straw_hue: HueInterval,
    pub straw_min_value: u8,
    pub soil_hue: HueInterval,
    pub soil_min_saturation: u8,
}

impl Default for ThresholdParams {
    fn default() -> Self {
        ThresholdParams {
            straw_hue: HueInterval::closed(35.0, 75.0),
            straw_min_value: 140,
            soil_hue: HueInterval::half_open(10.0, 35.0),
            soil_min_saturation: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelClass {
    Background,
    Soil,
    Straw,
}

impl ThresholdParams {
    pub fn validate(&self) -> Result<()> {
        self.straw_hue.validate("straw")?;
        self.soil_hue.validate("soil")
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let params: ThresholdParams = serde_json::from_str(&text)?;
        params.validate()?;
        Ok(params)
    }

    pub fn classify(&self, rgb: [u8; 3]) -> PixelClass {
        let (h, s, v) = rgb_to_hsv(rgb);
        if self.straw_hue.contains(h) && v >= f64::from(self.straw_min_value) {
            PixelClass::Straw
        } else if self.soil_hue.contains(h) && s >= f64::from(self.soil_min_saturation) {
            PixelClass::Soil
        } else {
            PixelClass::Background
        }
    }
}

/// Labels a frame with the default class ids (background 0, soil 1, straw 2).
pub fn threshold_segment(params: &ThresholdParams, frame: &RgbFrame) -> LabelMask {
    let ids = ClassIds::default();
    let labels = frame.pixels().map(|p| ids.of(params.classify(p))).collect();
    LabelMask::new(frame.width(), frame.height(), labels, ids.class_count)
        .expect("threshold labels are within the default scheme")
}

#[derive(Debug, Clone, Copy)]
struct ClassIds {
    background: u8,
    soil: u8,
    straw: u8,
    class_count: usize,
}

impl Default for ClassIds {
    fn default() -> Self {
        ClassIds {
            background: BACKGROUND,
            soil: SOIL,
            straw: STRAW,
            class_count: 3,
        }
    }
}

impl ClassIds {
    fn for_scheme(scheme: &ClassScheme) -> Result<Self> {
        let id = |name: &str| {
            scheme
                .id_of(name)
                .ok_or_else(|| Error::Scheme(format!("threshold segmenter needs a {name:?} class")))
        };
        Ok(ClassIds {
            background: id("background")?,
            soil: id("soil")?,
            straw: id("straw")?,
            class_count: scheme.class_count(),
        })
    }

    fn of(&self, class: PixelClass) -> u8 {
        match class {
            PixelClass::Background => self.background,
            PixelClass::Soil => self.soil,
            PixelClass::Straw => self.straw,
        }
    }
}

/// Threshold backend bound to a class scheme by class name.
#[derive(Debug, Clone)]
pub struct ThresholdSegmenter {
    params: ThresholdParams,
    ids: ClassIds,
}

impl ThresholdSegmenter {
    pub fn new(params: ThresholdParams, scheme: &ClassScheme) -> Result<Self> {
        params.validate()?;
        Ok(ThresholdSegmenter {
            params,
            ids: ClassIds::for_scheme(scheme)?,
        })
    }

    pub fn params(&self) -> &ThresholdParams {
        &self.params
    }
}

impl super::Segmenter for ThresholdSegmenter {
    fn segment(&mut self, frame: &RgbFrame, _stem: &str) -> Result<LabelMask> {
        let labels = frame
            .pixels()
            .map(|p| self.ids.of(self.params.classify(p)))
            .collect();
        LabelMask::new(frame.width(), frame.height(), labels, self.ids.class_count)
    }
}
