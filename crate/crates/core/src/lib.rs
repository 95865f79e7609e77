//! Seed-trench cleanliness from per-pixel segmentation masks.
//!
//! Each frame is segmented into background, soil and straw; the share of
//! pixels per class is averaged over a run, and runs are ranked by how
//! little straw they leave in the trench. Segmentation quality against
//! ground truth is scored with per-class IoU and accuracy.

pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod report;
pub mod segmenter;
pub mod synthgen;

pub use error::{Error, Result};
