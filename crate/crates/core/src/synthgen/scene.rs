use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{LabelMask, RgbFrame, BACKGROUND, SOIL, STRAW};

/// Stroke geometry, in pixels.
const STROKE_WIDTH: (u32, u32) = (2, 6);
const STROKE_LENGTH: (u32, u32) = (20, 120);
/// Strokes that would push straw coverage more than this far past the
/// target end generation.
const OVERSHOOT_TOLERANCE: f64 = 0.01;
const MAX_STROKES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub soil: [u8; 3],
    pub straw: [u8; 3],
    pub machinery: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            soil: [101, 67, 33],
            straw: [218, 190, 112],
            machinery: [60, 60, 60],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneParams {
    pub width: u32,
    pub height: u32,
    pub target_straw_fraction: f64,
    /// Rows at the top of the frame painted as machinery (background class).
    pub machinery_band_rows: u32,
    /// Per-pixel brightness noise, uniform in `±noise_amplitude`, added
    /// equally to all three channels.
    pub noise_amplitude: u8,
    pub palette: Palette,
}

impl Default for SceneParams {
    fn default() -> Self {
        SceneParams {
            width: 512,
            height: 512,
            target_straw_fraction: 0.3,
            machinery_band_rows: 24,
            noise_amplitude: 15,
            palette: Palette::default(),
        }
    }
}

impl SceneParams {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParam(format!(
                "zero scene dimension {}x{}",
                self.width, self.height
            )));
        }
        let t = self.target_straw_fraction;
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParam(format!(
                "straw fraction {t} outside [0, 1]"
            )));
        }
        if self.machinery_band_rows >= self.height {
            return Err(Error::InvalidParam(format!(
                "machinery band of {} rows leaves no room in a {}-row frame",
                self.machinery_band_rows, self.height
            )));
        }
        let band = f64::from(self.machinery_band_rows) / f64::from(self.height);
        if t + band > 1.0 {
            return Err(Error::InvalidParam(format!(
                "straw fraction {t} unreachable with machinery band covering {band}"
            )));
        }
        Ok(())
    }
}

/// Ground-truth statistics recounted from the emitted mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMeta {
    pub seed: u64,
    /// Pixel share per class id: count / total.
    pub fractions: Vec<f64>,
    pub counts: Vec<u64>,
    pub strokes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub frame: RgbFrame,
    pub mask: LabelMask,
    pub meta: SceneMeta,
}

/// Renders a soil scene with a machinery band and straw strokes.
///
/// Deterministic in `(params, seed)`; the PRNG is ChaCha8 seeded via
/// `seed_from_u64`.
pub fn generate_scene(params: &SceneParams, seed: u64) -> Result<Scene> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (params.width, params.height);
    let total = w as usize * h as usize;
    let band = params.machinery_band_rows;

    let mut labels = vec![SOIL; total];
    labels[..band as usize * w as usize].fill(BACKGROUND);

    let target = params.target_straw_fraction * total as f64;
    let limit = (params.target_straw_fraction + OVERSHOOT_TOLERANCE) * total as f64;
    let mut straw = 0usize;
    let mut strokes = 0usize;
    let mut pending = Vec::new();
    while (straw as f64) < target {
        if strokes >= MAX_STROKES {
            return Err(Error::Generation(format!(
                "straw coverage {:.4} still below target after {MAX_STROKES} strokes",
                straw as f64 / total as f64
            )));
        }
        pending.clear();
        stroke_pixels(&mut rng, w, h, band, &mut pending);
        let fresh = pending.iter().filter(|&&i| labels[i] != STRAW).count();
        if (straw + fresh) as f64 > limit {
            break;
        }
        for &i in &pending {
            labels[i] = STRAW;
        }
        straw += fresh;
        strokes += 1;
    }

    let p = &params.palette;
    let amp = i16::from(params.noise_amplitude);
    let mut pixels = Vec::with_capacity(total * 3);
    for &label in &labels {
        let base = match label {
            STRAW => p.straw,
            SOIL => p.soil,
            _ => p.machinery,
        };
        let offset = if amp > 0 {
            rng.random_range(-amp..=amp)
        } else {
            0
        };
        pixels.extend(
            base.iter()
                .map(|&c| (i16::from(c) + offset).clamp(0, 255) as u8),
        );
    }

    let mask = LabelMask::new(w, h, labels, 3)?;
    let counts = mask.class_counts();
    let fractions = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(Scene {
        frame: RgbFrame::new(w, h, pixels)?,
        mask,
        meta: SceneMeta {
            seed,
            fractions,
            counts,
            strokes,
        },
    })
}

/// Indices of pixels covered by one randomly placed, oriented rectangle,
/// clipped to the frame below the machinery band.
fn stroke_pixels(rng: &mut ChaCha8Rng, w: u32, h: u32, band: u32, out: &mut Vec<usize>) {
    let cx = rng.random_range(0.0..f64::from(w));
    let cy = rng.random_range(f64::from(band)..f64::from(h));
    let angle = rng.random_range(0.0..std::f64::consts::PI);
    let half_len = f64::from(rng.random_range(STROKE_LENGTH.0..=STROKE_LENGTH.1)) / 2.0;
    let half_wid = f64::from(rng.random_range(STROKE_WIDTH.0..=STROKE_WIDTH.1)) / 2.0;
    let (sin, cos) = angle.sin_cos();

    let reach = half_len.hypot(half_wid);
    let x0 = (cx - reach).floor().max(0.0) as u32;
    let x1 = ((cx + reach).ceil() as u32).min(w - 1);
    let y0 = ((cy - reach).floor() as u32).max(band);
    let y1 = ((cy + reach).ceil() as u32).min(h - 1);
    for y in y0..=y1 {
        let dy = f64::from(y) + 0.5 - cy;
        for x in x0..=x1 {
            let dx = f64::from(x) + 0.5 - cx;
            let along = dx * cos + dy * sin;
            let across = -dx * sin + dy * cos;
            if along.abs() <= half_len && across.abs() <= half_wid {
                out.push(y as usize * w as usize + x as usize);
            }
        }
    }
}
