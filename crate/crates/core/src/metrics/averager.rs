use serde::{Deserialize, Serialize};

use super::ClassPercentages;
use crate::error::{Error, Result};

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Unweighted mean of per-frame class percentages over a stream of frames.
///
/// Every frame counts once regardless of its resolution. Two averagers over
/// disjoint parts of a stream can be combined with [`merge`](Self::merge).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulativeAverager {
    sums: Vec<CompensatedSum>,
    frame_count: u64,
}

impl CumulativeAverager {
    pub fn new(class_count: usize) -> Self {
        CumulativeAverager {
            sums: vec![CompensatedSum::default(); class_count],
            frame_count: 0,
        }
    }

    pub fn class_count(&self) -> usize {
        self.sums.len()
    }

    pub fn frame_count(&self) -> u64 {
        self.frame_count
    }

    pub fn accumulate(&mut self, p: &ClassPercentages) -> Result<()> {
        if p.class_count() != self.class_count() {
            return Err(Error::ClassCountMismatch {
                expected: self.class_count(),
                actual: p.class_count(),
            });
        }
        for (sum, &v) in self.sums.iter_mut().zip(&p.values) {
            sum.add(v);
        }
        self.frame_count += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &CumulativeAverager) -> Result<()> {
        if other.class_count() != self.class_count() {
            return Err(Error::ClassCountMismatch {
                expected: self.class_count(),
                actual: other.class_count(),
            });
        }
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
        self.frame_count += other.frame_count;
        Ok(())
    }

    /// Per-class cumulative average percentage.
    pub fn value(&self) -> Result<Vec<f64>> {
        if self.frame_count == 0 {
            return Err(Error::NoFrames);
        }
        let n = self.frame_count as f64;
        Ok(self.sums.iter().map(|s| s.total() / n).collect())
    }
}
