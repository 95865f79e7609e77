//! Per-frame class percentages, their cumulative average, confusion-matrix
//! scores and inference timing.

mod averager;
mod confusion;
mod percentages;
mod timing;

pub use averager::CumulativeAverager;
pub use confusion::ConfusionMatrix;
pub use percentages::{class_percentages, ClassPercentages};
pub use timing::{time_segmenter, TimingStats};
