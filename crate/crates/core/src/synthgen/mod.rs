//! Synthetic trench scenes with exact ground truth, and dataset preparation
//! (train/validation split, augmentation).

mod augment;
mod dataset;
mod scene;

pub use augment::{augment, Transform};
pub use dataset::{
    augment_dataset, frame_path, generate_dataset, mask_path, split_dataset, AugmentPlan, Manifest,
    Split, FRAMES_SUBDIR, MANIFEST_FILE, MASKS_SUBDIR,
};
pub use scene::{generate_scene, Palette, Scene, SceneMeta, SceneParams};
