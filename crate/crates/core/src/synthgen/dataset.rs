use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{augment, generate_scene, SceneParams, Transform};
use crate::error::{Error, Result};
use crate::raster::{load_frame, load_mask, save_frame, save_mask, ClassScheme, FrameSequence};
use crate::report::ClassValues;

pub const FRAMES_SUBDIR: &str = "frames";
pub const MASKS_SUBDIR: &str = "masks";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Generated dataset listing: parallel arrays of stems, seeds and per-class
/// achieved fractions (keyed by class name).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub stems: Vec<String>,
    pub seeds: Vec<u64>,
    pub fractions: Vec<ClassValues>,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn fraction(&self, index: usize, class: &str) -> Option<f64> {
        self.fractions.get(index)?.get(class)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        if manifest.seeds.len() != manifest.stems.len()
            || manifest.fractions.len() != manifest.stems.len()
        {
            return Err(Error::InvalidParam(format!(
                "{}: stems, seeds and fractions differ in length",
                path.display()
            )));
        }
        Ok(manifest)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}

pub fn frame_path(out_dir: &Path, stem: &str) -> PathBuf {
    out_dir
        .join(FRAMES_SUBDIR)
        .join(format!("frame_{stem}.png"))
}

pub fn mask_path(out_dir: &Path, stem: &str) -> PathBuf {
    out_dir.join(MASKS_SUBDIR).join(format!("mask_{stem}.png"))
}

/// Writes `n` scenes with seeds `base_seed..base_seed + n` as
/// `frames/frame_%05d.png` and `masks/mask_%05d.png` under `out_dir`, plus
/// `manifest.json`. Scenes are generated on all available cores.
pub fn generate_dataset(
    n: usize,
    params: &SceneParams,
    base_seed: u64,
    out_dir: &Path,
) -> Result<Manifest> {
    if n == 0 {
        return Err(Error::InvalidParam(
            "dataset size must be at least 1".into(),
        ));
    }
    params.validate()?;
    for sub in [FRAMES_SUBDIR, MASKS_SUBDIR] {
        let dir = out_dir.join(sub);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let scheme = ClassScheme::default();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(n);
    let mut results: Vec<Option<Result<Entry>>> = (0..n).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|worker| {
                let scheme = &scheme;
                s.spawn(move || {
                    (worker..n)
                        .step_by(workers)
                        .map(|i| (i, write_scene(i, params, base_seed, scheme, out_dir)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, entry) in handle.join().expect("scene worker panicked") {
                results[i] = Some(entry);
            }
        }
    });

    let mut manifest = Manifest {
        stems: Vec::with_capacity(n),
        seeds: Vec::with_capacity(n),
        fractions: Vec::with_capacity(n),
    };
    for item in results.into_iter().flatten() {
        let (stem, seed, fractions) = item?;
        manifest.stems.push(stem);
        manifest.seeds.push(seed);
        manifest.fractions.push(fractions);
    }
    let path = out_dir.join(MANIFEST_FILE);
    std::fs::write(&path, manifest.to_json()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

type Entry = (String, u64, ClassValues);

fn write_scene(
    index: usize,
    params: &SceneParams,
    base_seed: u64,
    scheme: &ClassScheme,
    out_dir: &Path,
) -> Result<Entry> {
    let stem = format!("{index:05}");
    let seed = base_seed.wrapping_add(index as u64);
    let scene = generate_scene(params, seed)?;
    save_frame(&scene.frame, &frame_path(out_dir, &stem))?;
    save_mask(&scene.mask, &mask_path(out_dir, &stem))?;
    let fractions = ClassValues::from_names(scheme.names(), &scene.meta.fractions);
    Ok((stem, seed, fractions))
}

/// How augmented copies are produced for each frame/mask pair.
#[derive(Debug, Clone, PartialEq)]
pub enum AugmentPlan {
    /// One copy per listed transform.
    Fixed(Vec<Transform>),
    /// `copies` randomly drawn transforms, seeded.
    Random { copies: usize, seed: u64 },
}

/// Writes augmented copies of every paired entry of `sequence` to
/// `out_dir/frames/frame_{stem}_{k}.png` and `out_dir/masks/mask_{stem}_{k}.png`.
/// Returns the (stem, transform) of each written copy.
pub fn augment_dataset(
    sequence: &FrameSequence,
    scheme: &ClassScheme,
    plan: &AugmentPlan,
    out_dir: &Path,
) -> Result<Vec<(String, Transform)>> {
    for sub in [FRAMES_SUBDIR, MASKS_SUBDIR] {
        let dir = out_dir.join(sub);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    let mut rng = match plan {
        AugmentPlan::Random { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        AugmentPlan::Fixed(_) => None,
    };
    let mut written = Vec::new();
    for entry in &sequence.entries {
        let mask_file = entry
            .mask
            .as_ref()
            .ok_or_else(|| Error::MissingMask(entry.stem.clone()))?;
        let frame = load_frame(&entry.frame)?;
        let mask = load_mask(mask_file, scheme)?;
        let transforms: Vec<Transform> = match (plan, rng.as_mut()) {
            (AugmentPlan::Fixed(list), _) => list.clone(),
            (AugmentPlan::Random { copies, .. }, Some(rng)) => {
                (0..*copies).map(|_| Transform::random(rng)).collect()
            }
            (AugmentPlan::Random { .. }, None) => unreachable!("random plan always seeds"),
        };
        for (k, transform) in transforms.into_iter().enumerate() {
            let (f, m) = augment(&frame, &mask, transform)?;
            let stem = format!("{}_{k}", entry.stem);
            save_frame(&f, &frame_path(out_dir, &stem))?;
            save_mask(&m, &mask_path(out_dir, &stem))?;
            written.push((stem, transform));
        }
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<String>,
    pub validation: Vec<String>,
}

/// Seeded shuffle of the manifest stems, then the first `⌈ratio·n⌉` go to
/// training and the rest to validation.
pub fn split_dataset(manifest: &Manifest, ratio: f64, seed: u64) -> Result<Split> {
    if manifest.is_empty() {
        return Err(Error::InvalidParam("manifest has no entries".into()));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParam(format!(
            "split ratio {ratio} must lie strictly between 0 and 1"
        )));
    }
    let mut stems = manifest.stems.clone();
    stems.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = stems.len();
    // 1e-9 absorbs representation error such as 0.7 * 10 = 7.000000000000001
    let train_len = ((ratio * n as f64 - 1e-9).ceil() as usize).min(n);
    let validation = stems.split_off(train_len);
    Ok(Split {
        train: stems,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(n: usize) -> Manifest {
        Manifest {
            stems: (0..n).map(|i| format!("{i:05}")).collect(),
            seeds: (0..n as u64).collect(),
            fractions: vec![ClassValues::default(); n],
        }
    }

    #[test]
    fn ceiling_rule() {
        let s = split_dataset(&manifest(5), 0.8, 1).unwrap();
        assert_eq!((s.train.len(), s.validation.len()), (4, 1));
        let s = split_dataset(&manifest(10), 0.7, 1).unwrap();
        assert_eq!(s.train.len(), 7);
        let s = split_dataset(&manifest(3), 0.5, 1).unwrap();
        assert_eq!(s.train.len(), 2);
        let s = split_dataset(&manifest(1), 0.5, 1).unwrap();
        assert_eq!((s.train.len(), s.validation.len()), (1, 0));
    }

    #[test]
    fn seeded_and_disjoint() {
        let m = manifest(50);
        let a = split_dataset(&m, 0.8, 7).unwrap();
        assert_eq!(a, split_dataset(&m, 0.8, 7).unwrap());
        assert_ne!(a, split_dataset(&m, 0.8, 8).unwrap());
        let mut all: Vec<_> = a.train.iter().chain(&a.validation).cloned().collect();
        all.sort();
        assert_eq!(all, m.stems);
    }

    #[test]
    fn augment_dataset_writes_pairs() {
        use crate::raster::scan_sequence;
        let src = tempfile::tempdir().unwrap();
        let params = SceneParams {
            width: 40,
            height: 30,
            machinery_band_rows: 4,
            ..Default::default()
        };
        generate_dataset(2, &params, 1, src.path()).unwrap();
        let seq = scan_sequence(
            &src.path().join(FRAMES_SUBDIR),
            Some(&src.path().join(MASKS_SUBDIR)),
        )
        .unwrap();
        let scheme = ClassScheme::default();

        let out = tempfile::tempdir().unwrap();
        let plan = AugmentPlan::Fixed(vec![Transform::Rotate90, Transform::Brightness(5)]);
        let written = augment_dataset(&seq, &scheme, &plan, out.path()).unwrap();
        assert_eq!(written.len(), 4);
        assert_eq!(written[0].0, "00000_0");
        let rotated = load_mask(&mask_path(out.path(), "00000_0"), &scheme).unwrap();
        assert_eq!((rotated.width(), rotated.height()), (30, 40));

        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let plan = AugmentPlan::Random { copies: 3, seed: 4 };
        let wa = augment_dataset(&seq, &scheme, &plan, a.path()).unwrap();
        let wb = augment_dataset(&seq, &scheme, &plan, b.path()).unwrap();
        assert_eq!(wa.len(), 6);
        assert_eq!(wa, wb);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(split_dataset(&manifest(0), 0.8, 1).is_err());
        for r in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(split_dataset(&manifest(4), r, 1).is_err());
        }
    }
}
