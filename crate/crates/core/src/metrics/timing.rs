use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::RgbFrame;
use crate::segmenter::Segmenter;

/// Per-frame segmentation latencies in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub samples: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    /// Nearest-rank 95th percentile.
    pub p95: f64,
}

impl TimingStats {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::NoFrames);
        }
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Ok(TimingStats {
            samples,
            mean,
            median,
            p95: nearest_rank(&sorted, 95),
        })
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }
}

/// Smallest sample such that at least `pct` percent of samples are ≤ it.
fn nearest_rank(sorted: &[f64], pct: usize) -> f64 {
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// Times `segment()` alone over each frame. Loading frames is left to the
/// iterator and falls outside the measured interval.
pub fn time_segmenter<S, I>(segmenter: &mut S, frames: I) -> Result<TimingStats>
where
    S: Segmenter + ?Sized,
    I: IntoIterator<Item = Result<(String, RgbFrame)>>,
{
    let mut samples = Vec::new();
    for (index, item) in frames.into_iter().enumerate() {
        let (stem, frame) = item?;
        let start = Instant::now();
        let outcome = segmenter.segment(&frame, &stem);
        let elapsed = start.elapsed();
        if let Err(source) = outcome {
            return Err(Error::FrameFailed {
                index,
                stem,
                source: Box::new(source),
            });
        }
        samples.push(elapsed.as_secs_f64() * 1e3);
    }
    TimingStats::from_samples(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::LabelMask;

    #[test]
    fn single_sample_stats() {
        let t = TimingStats::from_samples(vec![3.5]).unwrap();
        assert_eq!((t.mean, t.median, t.p95), (3.5, 3.5, 3.5));
    }

    #[test]
    fn nearest_rank_p95() {
        let samples: Vec<f64> = (1..=20).map(f64::from).collect();
        let t = TimingStats::from_samples(samples).unwrap();
        // ceil(0.95 * 20) = 19
        assert_eq!(t.p95, 19.0);
        assert_eq!(t.median, 10.5);
        assert_eq!(t.mean, 10.5);

        let t = TimingStats::from_samples((1..=101).rev().map(f64::from).collect()).unwrap();
        assert_eq!(t.p95, 96.0);
        assert_eq!(t.median, 51.0);
    }

    #[test]
    fn empty_samples_rejected() {
        assert!(TimingStats::from_samples(vec![]).is_err());
    }

    struct FailOn(usize, usize);

    impl Segmenter for FailOn {
        fn segment(&mut self, frame: &RgbFrame, _stem: &str) -> Result<LabelMask> {
            self.1 += 1;
            if self.1 > self.0 {
                return Err(Error::InvalidParam("boom".into()));
            }
            LabelMask::filled(frame.width(), frame.height(), 0, 3)
        }
    }

    fn frames(n: usize) -> impl Iterator<Item = Result<(String, RgbFrame)>> {
        (0..n).map(|i| Ok((format!("f{i}"), RgbFrame::filled(2, 2, [0, 0, 0]).unwrap())))
    }

    #[test]
    fn failure_reports_frame_index() {
        let err = time_segmenter(&mut FailOn(2, 0), frames(5)).unwrap_err();
        match err {
            Error::FrameFailed { index, stem, .. } => {
                assert_eq!(index, 2);
                assert_eq!(stem, "f2");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_frames_rejected() {
        assert!(time_segmenter(&mut FailOn(9, 0), frames(0)).is_err());
    }

    #[test]
    fn counts_every_frame() {
        let t = time_segmenter(&mut FailOn(99, 0), frames(7)).unwrap();
        assert_eq!(t.count(), 7);
        assert!(t.samples.iter().all(|&s| s >= 0.0));
    }
}
