use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{ClassScheme, LabelMask};

/// Share of a frame's pixels held by each class, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassPercentages {
    pub values: Vec<f64>,
    pub frame_pixels: u64,
}

impl ClassPercentages {
    pub fn class_count(&self) -> usize {
        self.values.len()
    }
}

/// Per-class percentage of a single frame: class pixels over all pixels,
/// background included, times 100.
pub fn class_percentages(mask: &LabelMask, scheme: &ClassScheme) -> Result<ClassPercentages> {
    if mask.class_count() != scheme.class_count() {
        return Err(Error::ClassCountMismatch {
            expected: scheme.class_count(),
            actual: mask.class_count(),
        });
    }
    percentages_from_counts(&mask.class_counts())
}

pub(crate) fn percentages_from_counts(counts: &[u64]) -> Result<ClassPercentages> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyFrame);
    }
    let values = counts
        .iter()
        .map(|&c| c as f64 / total as f64 * 100.0)
        .collect();
    Ok(ClassPercentages {
        values,
        frame_pixels: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{SOIL, STRAW};

    #[test]
    fn straw_share_of_hundred_square() {
        let mut labels = vec![SOIL; 100 * 100];
        labels[..4000].fill(STRAW);
        let mask = LabelMask::new(100, 100, labels, 3).unwrap();
        let p = class_percentages(&mask, &ClassScheme::default()).unwrap();
        assert_eq!(p.values[STRAW as usize], 40.0);
        assert_eq!(p.values[SOIL as usize], 60.0);
        assert_eq!(p.values[0], 0.0);
        assert_eq!(p.frame_pixels, 10_000);
    }

    #[test]
    fn uniform_soil() {
        let mask = LabelMask::filled(7, 3, SOIL, 3).unwrap();
        let p = class_percentages(&mask, &ClassScheme::default()).unwrap();
        assert_eq!(p.values, vec![0.0, 100.0, 0.0]);
    }

    #[test]
    fn scheme_mismatch() {
        let mask = LabelMask::filled(2, 2, 0, 4).unwrap();
        assert!(matches!(
            class_percentages(&mask, &ClassScheme::default()),
            Err(Error::ClassCountMismatch { .. })
        ));
    }

    #[test]
    fn zero_pixels_is_error() {
        assert!(matches!(
            percentages_from_counts(&[0, 0, 0]),
            Err(Error::EmptyFrame)
        ));
    }
}
