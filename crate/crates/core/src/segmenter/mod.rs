//! Segmentation backends: ground-truth masks from disk, an HSV colour
//! threshold baseline, and a remote model worker.

mod hsv;
mod oracle;
pub mod protocol;
mod remote;

use std::path::PathBuf;
use std::time::{Duration, Instant};

pub use hsv::{
    rgb_to_hsv, threshold_segment, HueInterval, PixelClass, ThresholdParams, ThresholdSegmenter,
};
pub use oracle::OracleSegmenter;
pub use remote::{RemoteSegmenter, DEFAULT_TIMEOUT};

use crate::error::{Error, Result};
use crate::raster::{ClassScheme, LabelMask, RgbFrame};

/// Produces one class id per pixel of a frame.
pub trait Segmenter {
    fn segment(&mut self, frame: &RgbFrame, stem: &str) -> Result<LabelMask>;
}

impl<S: Segmenter + ?Sized> Segmenter for Box<S> {
    fn segment(&mut self, frame: &RgbFrame, stem: &str) -> Result<LabelMask> {
        (**self).segment(frame, stem)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SegmenterSpec {
    Oracle { masks_dir: PathBuf },
    Threshold(ThresholdParams),
    Remote { host: String, port: u16 },
}

impl SegmenterSpec {
    /// Parses `oracle:DIR`, `hsv`, `hsv:PARAMS.json` or `remote:HOST:PORT`.
    /// A params file is read here.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::SegmenterSpec(spec.to_owned());
        let (kind, rest) = match spec.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (spec, None),
        };
        match (kind, rest) {
            ("oracle", Some(dir)) if !dir.is_empty() => Ok(SegmenterSpec::Oracle {
                masks_dir: PathBuf::from(dir),
            }),
            ("hsv", None) => Ok(SegmenterSpec::Threshold(ThresholdParams::default())),
            ("hsv", Some(file)) if !file.is_empty() => Ok(SegmenterSpec::Threshold(
                ThresholdParams::from_json_file(file.as_ref())?,
            )),
            ("remote", Some(addr)) => {
                let (host, port) = addr.rsplit_once(':').ok_or_else(bad)?;
                let port: u16 = port.parse().map_err(|_| bad())?;
                if host.is_empty() || port == 0 {
                    return Err(bad());
                }
                Ok(SegmenterSpec::Remote {
                    host: host
                        .trim_start_matches('[')
                        .trim_end_matches(']')
                        .to_owned(),
                    port,
                })
            }
            _ => Err(bad()),
        }
    }

    pub fn build(
        &self,
        scheme: &ClassScheme,
        timeout: Duration,
    ) -> Result<Box<dyn Segmenter + Send>> {
        Ok(match self {
            SegmenterSpec::Oracle { masks_dir } => {
                Box::new(OracleSegmenter::open(masks_dir, scheme)?)
            }
            SegmenterSpec::Threshold(params) => Box::new(ThresholdSegmenter::new(*params, scheme)?),
            SegmenterSpec::Remote { host, port } => {
                Box::new(RemoteSegmenter::connect(host, *port, scheme, timeout)?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegResult {
    pub mask: LabelMask,
    pub elapsed_ms: f64,
}

/// Runs one segmentation call, timing it and checking the mask covers the
/// frame exactly.
pub fn segment<S: Segmenter + ?Sized>(
    segmenter: &mut S,
    frame: &RgbFrame,
    stem: &str,
) -> Result<SegResult> {
    let start = Instant::now();
    let mask = segmenter.segment(frame, stem)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if (mask.width(), mask.height()) != (frame.width(), frame.height()) {
        return Err(Error::DimensionMismatch {
            left_name: "frame",
            left_w: frame.width(),
            left_h: frame.height(),
            right_name: "mask",
            right_w: mask.width(),
            right_h: mask.height(),
        });
    }
    Ok(SegResult { mask, elapsed_ms })
}
