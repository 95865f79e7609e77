//! Run summaries, cross-run comparison and ranking, and report emission.

mod class_values;
mod compare;
mod evaluation;
mod format;
mod summary;

pub use class_values::ClassValues;
pub use compare::{
    emit, emit_summary, rank_by_cleanliness, ComparisonDocument, ComparisonTable, RankedRun,
    Ranking, CSV_HEADER,
};
pub use evaluation::{ClassScore, EvaluationReport};
pub use format::{fmt_2dp, Format};
pub use summary::{summarize, RunSummary, TimingSummary};
