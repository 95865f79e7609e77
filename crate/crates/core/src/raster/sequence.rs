use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const FRAME_EXTENSIONS: &[&str] = &["png", "ppm"];
const MASK_EXTENSIONS: &[&str] = &["png"];

/// Role prefixes dropped from file stems when pairing frames with masks,
/// so `frame_00003.png` pairs with `mask_00003.png`.
const ROLE_PREFIXES: &[&str] = &["frame_", "mask_"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceEntry {
    pub stem: String,
    pub frame: PathBuf,
    pub mask: Option<PathBuf>,
}

/// Frames ordered by stem (byte order). `unpaired` lists frame stems that
/// had no mask when a mask directory was scanned.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameSequence {
    pub entries: Vec<SequenceEntry>,
    pub unpaired: Vec<String>,
}

impl FrameSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stems(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.stem.as_str())
    }
}

/// The pairing key of an image path.
pub fn pairing_stem(path: &Path) -> Option<String> {
    let stem = path.file_stem()?.to_str()?;
    let key = ROLE_PREFIXES
        .iter()
        .find_map(|p| stem.strip_prefix(p).filter(|rest| !rest.is_empty()))
        .unwrap_or(stem);
    Some(key.to_owned())
}

fn has_extension(path: &Path, allowed: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| allowed.iter().any(|a| e.eq_ignore_ascii_case(a)))
}

fn index_dir(dir: &Path, extensions: &[&str]) -> Result<BTreeMap<String, PathBuf>> {
    let read = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut index: BTreeMap<String, PathBuf> = BTreeMap::new();
    for entry in read {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if !path.is_file() || !has_extension(&path, extensions) {
            continue;
        }
        let Some(stem) = pairing_stem(&path) else {
            continue;
        };
        if let Some(first) = index.get(&stem) {
            let (first, second) = if *first < path {
                (first.clone(), path)
            } else {
                (path, first.clone())
            };
            return Err(Error::DuplicateStem {
                stem,
                first,
                second,
            });
        }
        index.insert(stem, path);
    }
    if index.is_empty() {
        return Err(Error::EmptyDirectory {
            dir: dir.to_path_buf(),
        });
    }
    Ok(index)
}

/// Mask files of a directory keyed by pairing stem.
pub fn index_masks(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    index_dir(dir, MASK_EXTENSIONS)
}

pub fn scan_sequence(frames_dir: &Path, masks_dir: Option<&Path>) -> Result<FrameSequence> {
    let frames = index_dir(frames_dir, FRAME_EXTENSIONS)?;
    let masks = masks_dir.map(index_masks).transpose()?;

    let mut seq = FrameSequence::default();
    for (stem, frame) in frames {
        let mask = masks.as_ref().and_then(|m| m.get(&stem).cloned());
        if masks.is_some() && mask.is_none() {
            seq.unpaired.push(stem.clone());
        }
        seq.entries.push(SequenceEntry { stem, frame, mask });
    }
    if !seq.unpaired.is_empty() {
        log::warn!(
            "{} frame(s) without masks: {}",
            seq.unpaired.len(),
            seq.unpaired.join(", ")
        );
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn touch(dir: &Path, name: &str) {
        std::fs::write(dir.join(name), b"x").unwrap();
    }

    #[test]
    fn sorted_by_stem() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "b.png");
        touch(dir.path(), "a.png");
        touch(dir.path(), "notes.txt");
        let seq = scan_sequence(dir.path(), None).unwrap();
        assert_eq!(seq.stems().collect::<Vec<_>>(), ["a", "b"]);
        assert!(seq.unpaired.is_empty());
    }

    #[test]
    fn byte_order_not_natural_order() {
        let dir = tempfile::tempdir().unwrap();
        for n in ["f10.png", "f9.png", "F1.png"] {
            touch(dir.path(), n);
        }
        let seq = scan_sequence(dir.path(), None).unwrap();
        assert_eq!(seq.stems().collect::<Vec<_>>(), ["F1", "f10", "f9"]);
    }

    #[test]
    fn pairs_masks_and_reports_missing() {
        let frames = tempfile::tempdir().unwrap();
        let masks = tempfile::tempdir().unwrap();
        touch(frames.path(), "a.png");
        touch(frames.path(), "b.png");
        touch(masks.path(), "a.png");
        let seq = scan_sequence(frames.path(), Some(masks.path())).unwrap();
        assert_eq!(seq.entries[0].mask, Some(masks.path().join("a.png")));
        assert_eq!(seq.entries[1].mask, None);
        assert_eq!(seq.unpaired, vec!["b".to_string()]);
    }

    #[test]
    fn role_prefixes_pair() {
        let frames = tempfile::tempdir().unwrap();
        let masks = tempfile::tempdir().unwrap();
        touch(frames.path(), "frame_00001.png");
        touch(masks.path(), "mask_00001.png");
        let seq = scan_sequence(frames.path(), Some(masks.path())).unwrap();
        assert_eq!(seq.entries[0].stem, "00001");
        assert!(seq.entries[0].mask.is_some());
    }

    #[test]
    fn empty_dir_is_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            scan_sequence(dir.path(), None),
            Err(Error::EmptyDirectory { .. })
        ));
    }

    #[test]
    fn duplicate_stems_rejected() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "a.png");
        touch(dir.path(), "a.ppm");
        assert!(matches!(
            scan_sequence(dir.path(), None),
            Err(Error::DuplicateStem { .. })
        ));
    }
}
