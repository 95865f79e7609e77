//! End-to-end workflows over frame directories: quantify a run, evaluate
//! predicted masks against ground truth, and benchmark a segmenter.

use std::path::Path;
use std::sync::mpsc;

use crate::error::{Error, Result};
use crate::metrics::{
    class_percentages, time_segmenter, ConfusionMatrix, CumulativeAverager, TimingStats,
};
use crate::raster::{index_masks, load_frame, load_mask, ClassScheme, FrameSequence, RgbFrame};
use crate::report::{summarize, EvaluationReport, RunSummary};
use crate::segmenter::{segment, Segmenter};

/// Decoded frames buffered ahead of segmentation.
const DECODE_WINDOW: usize = 4;

/// Runs the segmenter over the sequence in order, accumulating per-frame
/// class percentages. `progress` sees the frame count and running averager
/// after every frame.
pub fn quantify<S, P>(
    name: &str,
    sequence: &FrameSequence,
    segmenter: &mut S,
    scheme: &ClassScheme,
    mut progress: P,
) -> Result<RunSummary>
where
    S: Segmenter + ?Sized,
    P: FnMut(u64, &CumulativeAverager),
{
    let mut averager = CumulativeAverager::new(scheme.class_count());
    for_each_frame(sequence, |index, stem, frame| {
        let result = segment(segmenter, &frame, stem)
            .and_then(|r| class_percentages(&r.mask, scheme))
            .and_then(|p| averager.accumulate(&p));
        if let Err(source) = result {
            return Err(Error::FrameFailed {
                index,
                stem: stem.to_owned(),
                source: Box::new(source),
            });
        }
        progress(averager.frame_count(), &averager);
        Ok(())
    })?;
    summarize(name, &averager, scheme, None)
}

/// Times the segmenter over every frame of the sequence.
pub fn bench<S: Segmenter + ?Sized>(
    sequence: &FrameSequence,
    segmenter: &mut S,
) -> Result<TimingStats> {
    let frames = sequence
        .entries
        .iter()
        .map(|e| load_frame(&e.frame).map(|f| (e.stem.clone(), f)));
    time_segmenter(segmenter, frames)
}

/// Decodes frames on a helper thread, at most `DECODE_WINDOW` ahead, and
/// hands them to `visit` in sequence order.
fn for_each_frame<F>(sequence: &FrameSequence, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &str, RgbFrame) -> Result<()>,
{
    std::thread::scope(|s| {
        let (tx, rx) = mpsc::sync_channel::<Result<RgbFrame>>(DECODE_WINDOW);
        s.spawn(move || {
            for entry in &sequence.entries {
                if tx.send(load_frame(&entry.frame)).is_err() {
                    break;
                }
            }
        });
        for (index, entry) in sequence.entries.iter().enumerate() {
            let frame = rx
                .recv()
                .expect("decoder sends one item per entry")
                .map_err(|source| Error::FrameFailed {
                    index,
                    stem: entry.stem.clone(),
                    source: Box::new(source),
                })?;
            visit(index, &entry.stem, frame)?;
        }
        Ok(())
    })
}

/// Accumulates one confusion matrix over all prediction/ground-truth mask
/// pairs matched by stem. Every stem must be present on both sides.
pub fn evaluate_dirs(
    name: &str,
    pred_dir: &Path,
    gt_dir: &Path,
    scheme: &ClassScheme,
) -> Result<EvaluationReport> {
    let gt = index_masks(gt_dir)?;
    let pred = index_masks(pred_dir)?;
    let mut unpaired: Vec<String> = gt
        .keys()
        .filter(|k| !pred.contains_key(*k))
        .chain(pred.keys().filter(|k| !gt.contains_key(*k)))
        .cloned()
        .collect();
    if !unpaired.is_empty() {
        unpaired.sort();
        return Err(Error::Unpaired(unpaired));
    }
    let mut cm = ConfusionMatrix::new(scheme.class_count());
    for (index, (stem, gt_path)) in gt.iter().enumerate() {
        let pair = load_mask(gt_path, scheme)
            .and_then(|g| load_mask(&pred[stem], scheme).map(|p| (g, p)))
            .and_then(|(g, p)| cm.accumulate(&g, &p));
        if let Err(source) = pair {
            return Err(Error::FrameFailed {
                index,
                stem: stem.clone(),
                source: Box::new(source),
            });
        }
    }
    Ok(EvaluationReport::new(name, gt.len() as u64, &cm, scheme))
}
