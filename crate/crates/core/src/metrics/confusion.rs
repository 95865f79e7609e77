use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::LabelMask;

/// Pixel counts indexed by (ground truth, prediction).
///
/// Per-class scores are `None` when the class is absent, i.e. the score's
/// denominator is zero; they are never reported as 0 or NaN.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    class_count: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(class_count: usize) -> Self {
        ConfusionMatrix {
            class_count,
            counts: vec![0; class_count * class_count],
        }
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.class_count + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row(&self, truth: usize) -> &[u64] {
        let c = self.class_count;
        &self.counts[truth * c..(truth + 1) * c]
    }

    pub fn accumulate(&mut self, gt: &LabelMask, pred: &LabelMask) -> Result<()> {
        if !gt.same_shape(pred) {
            return Err(Error::DimensionMismatch {
                left_name: "ground truth",
                left_w: gt.width(),
                left_h: gt.height(),
                right_name: "prediction",
                right_w: pred.width(),
                right_h: pred.height(),
            });
        }
        for mask in [gt, pred] {
            if mask.class_count() != self.class_count {
                return Err(Error::ClassCountMismatch {
                    expected: self.class_count,
                    actual: mask.class_count(),
                });
            }
        }
        let c = self.class_count;
        for (&g, &p) in gt.labels().iter().zip(pred.labels()) {
            self.counts[g as usize * c + p as usize] += 1;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if other.class_count != self.class_count {
            return Err(Error::ClassCountMismatch {
                expected: self.class_count,
                actual: other.class_count,
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    fn true_positives(&self, class: usize) -> u64 {
        self.get(class, class)
    }

    fn false_positives(&self, class: usize) -> u64 {
        (0..self.class_count)
            .filter(|&g| g != class)
            .map(|g| self.get(g, class))
            .sum()
    }

    fn false_negatives(&self, class: usize) -> u64 {
        self.row(class)
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != class)
            .map(|(_, &n)| n)
            .sum()
    }

    /// TP / (TP + FP + FN) per class.
    pub fn iou_per_class(&self) -> Vec<Option<f64>> {
        (0..self.class_count)
            .map(|c| {
                let tp = self.true_positives(c);
                let denom = tp + self.false_positives(c) + self.false_negatives(c);
                ratio(tp, denom)
            })
            .collect()
    }

    /// TP / (TP + FN) per class: the recall over ground-truth pixels.
    pub fn acc_per_class(&self) -> Vec<Option<f64>> {
        (0..self.class_count)
            .map(|c| {
                let tp = self.true_positives(c);
                ratio(tp, tp + self.false_negatives(c))
            })
            .collect()
    }

    /// Correct pixels over all pixels.
    pub fn overall_accuracy(&self) -> Option<f64> {
        let trace = (0..self.class_count).map(|c| self.get(c, c)).sum();
        ratio(trace, self.total())
    }
}

fn ratio(num: u64, denom: u64) -> Option<f64> {
    (denom > 0).then(|| num as f64 / denom as f64)
}
