//! Dictionary matching and the forward majority vote.
//!
//! Each test movelet is matched to the dictionary movelet with the
//! smallest discrepancy. The label at a time point is then a majority
//! vote over the movelet starting there and the following ones (ten
//! voters at the study's 10 Hz rate), reflecting that later windows still
//! carry information about the time point.
//!
//! All tie-breaking is deterministic: matching ties resolve to the first
//! candidate in dictionary order (activity enumeration order, then
//! movelet index), vote ties to the tied label with the smallest summed
//! discrepancy and then to enumeration order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{labels_for_timestamps, LabeledSeries, Recording};
use crate::model::{
    ActivityLabel, ClassifiedPoint, ClassifiedTimeline, Dictionary, Movelet,
};
use crate::movelet::{discrepancy, extract_movelets, extract_movelets_synced};
use crate::sync::synchronize;

/// Which sensor data feeds the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "accel-only")]
    AccelOnly,
    #[serde(rename = "gyro-only")]
    GyroOnly,
    #[serde(rename = "joint")]
    Joint,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::AccelOnly, Mode::GyroOnly, Mode::Joint];

    /// Movelet channel count this mode works with.
    pub fn channels(self) -> usize {
        match self {
            Mode::AccelOnly | Mode::GyroOnly => 3,
            Mode::Joint => 6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::AccelOnly => "accel-only",
            Mode::GyroOnly => "gyro-only",
            Mode::Joint => "joint",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected accel-only, gyro-only, or joint)"))
    }
}

/// Outcome of matching one test movelet against a dictionary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveletMatch {
    /// Start index of the test movelet in its source series.
    pub test_index: usize,
    /// Label of the winning dictionary movelet.
    pub label: ActivityLabel,
    /// The winning (smallest) discrepancy.
    pub discrepancy: f64,
    /// Index of the winning movelet within its activity's entry.
    pub dict_index: usize,
}

/// Exhaustively scan the dictionary and return the movelet with the
/// smallest discrepancy. Ties keep the first candidate in dictionary
/// iteration order.
pub fn match_movelet(m: &Movelet, dict: &Dictionary) -> Result<MoveletMatch> {
    if m.channel_count() != dict.channels() {
        return Err(Error::ChannelMismatch {
            left: m.channel_count(),
            right: dict.channels(),
        });
    }
    let mut best: Option<MoveletMatch> = None;
    for (label, dict_index, candidate) in dict.iter_movelets() {
        let d = discrepancy(m, candidate)?.value;
        if best.as_ref().is_none_or(|b| d < b.discrepancy) {
            best = Some(MoveletMatch {
                test_index: m.start_index(),
                label,
                discrepancy: d,
                dict_index,
            });
        }
    }
    best.ok_or(Error::EmptyDictionary)
}

/// Match every test movelet, preserving order.
pub fn classify_movelets(movelets: &[Movelet], dict: &Dictionary) -> Result<Vec<MoveletMatch>> {
    movelets.iter().map(|m| match_movelet(m, dict)).collect()
}

/// Majority vote for time point `i`: plurality label among matches
/// `i ..` up to `vote_window` voters (fewer near the end of the series).
/// Ties resolve to the smallest summed discrepancy among tied labels,
/// then to label enumeration order.
pub fn vote_timepoint(matches: &[MoveletMatch], i: usize, vote_window: usize) -> ActivityLabel {
    assert!(i < matches.len(), "vote index {i} out of range");
    let end = (i + vote_window).min(matches.len());

    let mut count = [0usize; 7];
    let mut sum = [0.0f64; 7];
    for m in &matches[i..end] {
        let ord = m.label.ordinal();
        count[ord] += 1;
        sum[ord] += m.discrepancy;
    }

    let mut winner = 0;
    for ord in 1..7 {
        if count[ord] > count[winner]
            || (count[ord] == count[winner] && count[ord] > 0 && sum[ord] < sum[winner])
        {
            winner = ord;
        }
    }
    ActivityLabel::DICTIONARY[winner]
}

fn voted_labels(matches: &[MoveletMatch], vote_window: usize) -> Vec<ActivityLabel> {
    (0..matches.len())
        .map(|i| vote_timepoint(matches, i, vote_window))
        .collect()
}

/// Classify one test recording in the given mode.
///
/// - accel-only: 3-channel accelerometer movelets, labels on accelerometer
///   timestamps;
/// - gyro-only: 3-channel movelets over the original (non-interpolated)
///   gyroscope data, labels on gyroscope timestamps;
/// - joint: 6-channel movelets over the synchronized series, labels on the
///   (clipped) accelerometer timestamps.
///
/// The final `n - 1` timestamps have no movelet starting at them and
/// inherit the label of the last computed vote.
pub fn classify_series(
    recording: &Recording,
    dict: &Dictionary,
    mode: Mode,
    vote_window: usize,
) -> Result<ClassifiedTimeline> {
    if dict.channels() != mode.channels() {
        return Err(Error::ChannelMismatch {
            left: dict.channels(),
            right: mode.channels(),
        });
    }
    let n = dict.window_len();

    let (timestamps, movelets) = match mode {
        Mode::AccelOnly => {
            let series = recording.require_accel()?;
            (series.timestamps(), extract_movelets(series, n)?)
        }
        Mode::GyroOnly => {
            let series = recording.require_gyro()?;
            (series.timestamps(), extract_movelets(series, n)?)
        }
        Mode::Joint => {
            let synced = synchronize(recording.require_accel()?, recording.require_gyro()?)?;
            let movelets = extract_movelets_synced(&synced.series, n)?;
            (synced.series.timestamps().to_vec(), movelets)
        }
    };

    let truth = labels_for_timestamps(&timestamps, &recording.intervals)?;
    let matches = classify_movelets(&movelets, dict)?;
    let votes = voted_labels(&matches, vote_window);

    let last_vote = *votes.last().expect("at least one movelet");
    let points = timestamps
        .iter()
        .zip(truth)
        .enumerate()
        .map(|(i, (&t, truth))| ClassifiedPoint {
            t,
            predicted: votes.get(i).copied().unwrap_or(last_vote),
            truth,
        })
        .collect();
    ClassifiedTimeline::new(points)
}

/// Map a gyroscope-timeline classification onto accelerometer timestamps:
/// each accelerometer instant takes the predicted label of the nearest
/// gyroscope timestamp (exact midpoints resolve to the earlier one), and
/// its ground truth comes from the accelerometer annotation.
pub fn map_to_accel_timestamps(
    gyro_timeline: &ClassifiedTimeline,
    labeled_accel: &LabeledSeries,
) -> Result<ClassifiedTimeline> {
    if gyro_timeline.is_empty() || labeled_accel.series().is_empty() {
        return Err(Error::EmptyTimeline);
    }
    let gyro_points = gyro_timeline.points();
    let gyro_ts: Vec<f64> = gyro_points.iter().map(|p| p.t).collect();

    let points = labeled_accel
        .series()
        .samples()
        .iter()
        .zip(labeled_accel.labels())
        .map(|(s, &truth)| {
            let idx = nearest_index(&gyro_ts, s.t);
            ClassifiedPoint {
                t: s.t,
                predicted: gyro_points[idx].predicted,
                truth,
            }
        })
        .collect();
    ClassifiedTimeline::new(points)
}

/// Index of the value in sorted `ts` nearest to `t`; exact midpoints pick
/// the earlier timestamp.
fn nearest_index(ts: &[f64], t: f64) -> usize {
    let after = ts.partition_point(|&v| v < t);
    if after == 0 {
        return 0;
    }
    if after == ts.len() {
        return ts.len() - 1;
    }
    let before = after - 1;
    if (t - ts[before]) <= (ts[after] - t) {
        before
    } else {
        after
    }
}
