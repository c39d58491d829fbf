//! Error type shared across the crate.

use thiserror::Error;

/// Why a design matrix came out empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptyCause {
    /// No observation matched the requested (season, day-type) segment.
    SegmentFilter,
    /// Observations matched the segment, but gaps or unusable values in the
    /// lag windows eliminated every candidate row.
    Gaps,
}

impl std::fmt::Display for EmptyCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmptyCause::SegmentFilter => write!(f, "no rows match the segment filter"),
            EmptyCause::Gaps => write!(f, "gaps or unusable values eliminated every row"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid timestamp: {0}")]
    InvalidTimestamp(String),

    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("line {line}: duplicate timestamp {timestamp}")]
    DuplicateTimestamp { line: usize, timestamp: String },

    #[error("empty design matrix for segment {segment}: {cause}")]
    EmptySegment { segment: String, cause: EmptyCause },

    #[error("insufficient data: {rows} rows for {columns} columns")]
    InsufficientData { rows: usize, columns: usize },

    #[error("forecast hour {timestamp} does not belong to segment {segment}")]
    SegmentMismatch { timestamp: String, segment: String },

    #[error("exogenous series does not cover {timestamp} ({variable})")]
    MissingExogenous { timestamp: String, variable: String },

    #[error("load history is not a contiguous hourly series ending before the origin: {0}")]
    HistoryGap(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
