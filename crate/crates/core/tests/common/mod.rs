//! Naive per-pixel oracles shared by the property and acceptance suites.
//! They walk coordinates and count set membership directly, independent of
//! the library's tallying code.
#![allow(dead_code)]

use rand::Rng;
use trenchcv::raster::LabelMask;

pub fn random_mask<R: Rng>(rng: &mut R, width: u32, height: u32, classes: usize) -> LabelMask {
    let labels = (0..width * height)
        .map(|_| rng.random_range(0..classes as u8))
        .collect();
    LabelMask::new(width, height, labels, classes).unwrap()
}

/// A mask with a random size up to 32×32 and 2–5 classes, skewed so some
/// classes are often missing.
pub fn random_case<R: Rng>(rng: &mut R) -> LabelMask {
    let w = rng.random_range(1..=32);
    let h = rng.random_range(1..=32);
    let classes = rng.random_range(2..=5);
    if rng.random_bool(0.3) {
        let used = rng.random_range(1..=classes);
        let labels = (0..w * h)
            .map(|_| rng.random_range(0..used as u8))
            .collect();
        LabelMask::new(w, h, labels, classes).unwrap()
    } else {
        random_mask(rng, w, h, classes)
    }
}

pub fn pixel_count_where(mask: &LabelMask, pred: impl Fn(u8) -> bool) -> u64 {
    let mut n = 0;
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if pred(mask.get(x, y)) {
                n += 1;
            }
        }
    }
    n
}

pub fn oracle_percentages(mask: &LabelMask) -> (Vec<u64>, Vec<f64>) {
    let total = u64::from(mask.width()) * u64::from(mask.height());
    let counts: Vec<u64> = (0..mask.class_count())
        .map(|c| pixel_count_where(mask, |l| l as usize == c))
        .collect();
    let pct = counts
        .iter()
        .map(|&n| n as f64 / total as f64 * 100.0)
        .collect();
    (counts, pct)
}

/// Pixel-pair counts across a list of (gt, pred) pairs.
pub struct PairTally {
    pub classes: usize,
    pub pairs: Vec<(LabelMask, LabelMask)>,
}

impl PairTally {
    fn count(&self, f: impl Fn(u8, u8) -> bool) -> u64 {
        let mut n = 0;
        for (gt, pred) in &self.pairs {
            for y in 0..gt.height() {
                for x in 0..gt.width() {
                    if f(gt.get(x, y), pred.get(x, y)) {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    pub fn cell(&self, g: u8, p: u8) -> u64 {
        self.count(|a, b| a == g && b == p)
    }

    /// |gt = c ∧ pred = c| / |gt = c ∨ pred = c|
    pub fn iou(&self, c: u8) -> Option<f64> {
        let inter = self.count(|g, p| g == c && p == c);
        let union = self.count(|g, p| g == c || p == c);
        (union > 0).then(|| inter as f64 / union as f64)
    }

    /// |gt = c ∧ pred = c| / |gt = c|
    pub fn acc(&self, c: u8) -> Option<f64> {
        let inter = self.count(|g, p| g == c && p == c);
        let truth = self.count(|g, _| g == c);
        (truth > 0).then(|| inter as f64 / truth as f64)
    }

    pub fn overall(&self) -> Option<f64> {
        let agree = self.count(|g, p| g == p);
        let total = self.count(|_, _| true);
        (total > 0).then(|| agree as f64 / total as f64)
    }
}
