//! Movelet-based human activity recognition from smartphone accelerometer
//! and gyroscope data.
//!
//! The movelet method builds a personal dictionary of one-second sensor
//! windows ("movelets") from a few seconds of labeled training data per
//! activity, then classifies new data by matching each test window to the
//! dictionary entry with the smallest channel-averaged Euclidean
//! discrepancy and smoothing the matches with a forward majority vote.
//! This crate implements the method for a single sensor (3 channels) and
//! for both sensors jointly (6 channels, with the gyroscope linearly
//! interpolated onto the accelerometer timeline), plus the evaluation
//! machinery: column-normalized confusion matrices, per-activity and
//! activity-group accuracies, and cross-method improvement summaries.
//!
//! Modules follow the data path:
//!
//! - [`model`]: labels, series, movelets, dictionaries, timelines
//! - [`ingest`]: sensor/label CSV parsing and training-segment extraction
//! - [`sync`]: gyroscope-to-accelerometer linear interpolation
//! - [`movelet`]: window extraction and the discrepancy metric
//! - [`classify`]: dictionary matching and the majority vote
//! - [`evaluate`]: confusion matrices and accuracy summaries
//! - [`pipeline`]: end-to-end experiments and artifact files

pub mod classify;
pub mod error;
pub mod evaluate;
pub mod ingest;
pub mod model;
pub mod movelet;
pub mod pipeline;
pub mod sync;

pub use error::{Error, Result};
pub use model::{
    ActivityLabel, ClassifiedPoint, ClassifiedTimeline, Dictionary, Movelet, Sample, SensorKind,
    SyncedSeries, TriaxialSeries,
};
