//! Sliding-window movelet extraction and the discrepancy metric.
//!
//! A movelet is a one-second window (n consecutive samples, 10 at the
//! study's 10 Hz rate) of 3- or 6-channel sensor data. Two movelets are
//! compared by taking the Euclidean distance per channel and averaging
//! those distances over the channel count. Distances are computed on raw
//! sensor units with no per-channel rescaling, so a 6-channel discrepancy
//! mixes g and rad/s directly.

use crate::error::{Error, Result};
use crate::model::{Movelet, SyncedSeries, TriaxialSeries};

/// Default window length: one second of samples at 10 Hz.
pub const DEFAULT_WINDOW_SAMPLES: usize = 10;

/// A channel-averaged movelet distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    /// Nonnegative; zero iff the compared movelets are identical.
    pub value: f64,
    /// Channel count the per-channel distances were averaged over.
    pub channels: usize,
}

/// Slide an `n`-sample window one sample at a time along per-channel data.
///
/// Returns exactly `T - n + 1` movelets for `T` samples; movelet `i`
/// covers samples `[i, i + n)`.
pub fn extract_movelet_windows(
    timestamps: &[f64],
    channels: &[Vec<f64>],
    n: usize,
) -> Result<Vec<Movelet>> {
    let len = timestamps.len();
    if len < n {
        return Err(Error::SeriesTooShort { len, min: n });
    }
    for ch in channels {
        if ch.len() != len {
            return Err(Error::LengthMismatch {
                left: ch.len(),
                right: len,
            });
        }
    }
    (0..=len - n)
        .map(|start| {
            Movelet::from_channels(
                start,
                timestamps[start..start + n].to_vec(),
                channels
                    .iter()
                    .map(|ch| ch[start..start + n].to_vec())
                    .collect(),
            )
        })
        .collect()
}

/// Extract 3-channel movelets from a single-sensor series.
pub fn extract_movelets(series: &TriaxialSeries, n: usize) -> Result<Vec<Movelet>> {
    let channels: Vec<Vec<f64>> = (0..3).map(|a| series.axis_values(a)).collect();
    extract_movelet_windows(&series.timestamps(), &channels, n)
}

/// Extract 6-channel movelets from a synchronized series.
pub fn extract_movelets_synced(series: &SyncedSeries, n: usize) -> Result<Vec<Movelet>> {
    extract_movelet_windows(series.timestamps(), series.channels(), n)
}

/// Euclidean distance between two equal-length value vectors.
pub fn axis_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let sum_sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum_sq.sqrt())
}

/// Discrepancy between two movelets: per-channel Euclidean distances
/// averaged over the channel count (3 for a single sensor, 6 joint).
pub fn discrepancy(a: &Movelet, b: &Movelet) -> Result<Discrepancy> {
    let channels = a.channel_count();
    if channels != b.channel_count() {
        return Err(Error::ChannelMismatch {
            left: channels,
            right: b.channel_count(),
        });
    }
    let mut total = 0.0;
    for c in 0..channels {
        total += axis_distance(a.channel(c), b.channel(c))?;
    }
    Ok(Discrepancy {
        value: total / channels as f64,
        channels,
    })
}
