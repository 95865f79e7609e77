//! Frames, label masks, image I/O and frame-directory ingestion.

mod frame;
mod io;
mod scheme;
mod sequence;

pub use frame::{LabelMask, RgbFrame};
pub use io::{load_frame, load_mask, save_frame, save_mask};
pub use scheme::{ClassScheme, BACKGROUND, SOIL, STRAW};
pub use sequence::{index_masks, pairing_stem, scan_sequence, FrameSequence, SequenceEntry};
