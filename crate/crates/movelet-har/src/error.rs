//! Error type shared across the crate.

use std::path::PathBuf;

use crate::model::{ActivityLabel, SensorKind};

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while ingesting, synchronizing,
/// classifying, or evaluating sensor data.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("timestamps not strictly increasing at sample {index} (t = {t})")]
    NonMonotoneTimestamps { index: usize, t: f64 },

    #[error("non-finite value at sample {index} ({field})")]
    NonFiniteValue { index: usize, field: &'static str },

    #[error("{path}:{line}: malformed row: {reason}")]
    MalformedRow {
        path: String,
        line: u64,
        reason: String,
    },

    #[error("overlapping label intervals [{first_start}, {first_end}) and [{second_start}, {second_end})")]
    OverlappingIntervals {
        first_start: f64,
        first_end: f64,
        second_start: f64,
        second_end: f64,
    },

    #[error("activity {label} absent from labels")]
    ActivityAbsent { label: ActivityLabel },

    #[error("interpolation target {t} outside source span [{first}, {last}]")]
    OutOfRange { t: f64, first: f64, last: f64 },

    #[error("series do not overlap in time")]
    NoOverlap,

    #[error("series too short: {len} samples, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("channel count mismatch: {left} vs {right}")]
    ChannelMismatch { left: usize, right: usize },

    #[error("movelet must have 3 or 6 channels, got {0}")]
    BadChannelCount(usize),

    #[error("dictionary label {label} not a dictionary activity")]
    NonDictionaryLabel { label: ActivityLabel },

    #[error("dictionary has no movelets")]
    EmptyDictionary,

    #[error("{kind} data required but not loaded")]
    MissingSensor { kind: SensorKind },

    #[error("timeline has no samples to evaluate")]
    EmptyTimeline,

    #[error("prediction may not be {label}; only dictionary activities are valid predictions")]
    PredictedOutOfDictionary { label: ActivityLabel },

    #[error("activity {label} has no ground-truth samples")]
    MissingActivity { label: ActivityLabel },

    #[error("baseline accuracy is zero; percent improvement undefined")]
    ZeroBaseline,

    #[error("step identifier {0} not one of 1, 2, 3, 5, 6")]
    InvalidStep(u8),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("dataset not found at {}", .0.display())]
    DatasetMissing(PathBuf),

    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attach a file path to a bare I/O error.
    pub fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into().display().to_string(),
            source,
        }
    }
}
