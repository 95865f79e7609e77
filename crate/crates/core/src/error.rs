use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: cannot decode image: {message}", .path.display())]
    Decode { path: PathBuf, message: String },

    #[error("{}: unsupported pixel format {found} (expected {expected})", .path.display())]
    PixelFormat {
        path: PathBuf,
        found: String,
        expected: &'static str,
    },

    #[error("unknown class id {value} at pixel {index} (class count {class_count})")]
    UnknownClassId {
        value: u8,
        index: usize,
        class_count: usize,
    },

    #[error("invalid class scheme: {0}")]
    Scheme(String),

    #[error("invalid raster: {0}")]
    Raster(String),

    #[error(
        "dimension mismatch: {left_name} is {left_w}x{left_h}, {right_name} is {right_w}x{right_h}"
    )]
    DimensionMismatch {
        left_name: &'static str,
        left_w: u32,
        left_h: u32,
        right_name: &'static str,
        right_w: u32,
        right_h: u32,
    },

    #[error("class count mismatch: expected {expected}, got {actual}")]
    ClassCountMismatch { expected: usize, actual: usize },

    #[error("frame has zero pixels")]
    EmptyFrame,

    #[error("no frames accumulated")]
    NoFrames,

    #[error("{}: directory contains no images", .dir.display())]
    EmptyDirectory { dir: PathBuf },

    #[error("duplicate stem {stem:?} ({} and {})", .first.display(), .second.display())]
    DuplicateStem {
        stem: String,
        first: PathBuf,
        second: PathBuf,
    },

    #[error("unpaired stems: {}", .0.join(", "))]
    Unpaired(Vec<String>),

    #[error("no mask for stem {0:?}")]
    MissingMask(String),

    #[error("segmenter failed on frame {index} ({stem}): {source}")]
    FrameFailed {
        index: usize,
        stem: String,
        #[source]
        source: Box<Error>,
    },

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("worker returned status {status}: {message}")]
    WorkerStatus { status: u8, message: String },

    #[error("network error: {0}")]
    Network(#[from] std::io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid segmenter spec {0:?}")]
    SegmenterSpec(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid report: {0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
