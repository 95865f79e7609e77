use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::{index_masks, load_mask, ClassScheme, LabelMask, RgbFrame};

/// Returns the ground-truth mask stored on disk under the frame's stem.
#[derive(Debug, Clone)]
pub struct OracleSegmenter {
    masks: BTreeMap<String, PathBuf>,
    scheme: ClassScheme,
}

impl OracleSegmenter {
    pub fn open(masks_dir: &Path, scheme: &ClassScheme) -> Result<Self> {
        Ok(OracleSegmenter {
            masks: index_masks(masks_dir)?,
            scheme: scheme.clone(),
        })
    }
}

impl super::Segmenter for OracleSegmenter {
    fn segment(&mut self, _frame: &RgbFrame, stem: &str) -> Result<LabelMask> {
        let path = self
            .masks
            .get(stem)
            .ok_or_else(|| Error::MissingMask(stem.to_owned()))?;
        load_mask(path, &self.scheme)
    }
}
