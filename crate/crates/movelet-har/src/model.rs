//! Domain vocabulary shared by all modules: activity labels, sensor
//! samples, series, movelets, dictionaries, and classification timelines.
//!
//! All types are immutable after construction and validated up front, so
//! downstream code can share them freely across workers without re-checking.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Activity labels used by the study.
///
/// The seven dictionary activities are the only valid predictions. Ground
/// truth may additionally carry [`ActivityLabel::OutOfDictionary`] for
/// activities the participant performed that have no dictionary entry (in
/// this data set, going through a revolving door), so evaluation can report
/// how those periods were absorbed.
///
/// The declaration order is the canonical enumeration order used for
/// deterministic tie-breaking and for confusion-matrix axes.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum ActivityLabel {
    #[serde(rename = "walk")]
    Walk,
    #[serde(rename = "stand")]
    Stand,
    #[serde(rename = "stairUp")]
    StairUp,
    #[serde(rename = "stairDown")]
    StairDown,
    #[serde(rename = "sit")]
    Sit,
    #[serde(rename = "sitToStand")]
    SitToStand,
    #[serde(rename = "standToSit")]
    StandToSit,
    /// Truth-only label for activities outside the dictionary.
    #[serde(rename = "revolvingDoor")]
    OutOfDictionary,
}

impl ActivityLabel {
    /// The seven activities that may appear in a dictionary (and hence in
    /// predictions), in enumeration order.
    pub const DICTIONARY: [ActivityLabel; 7] = [
        ActivityLabel::Walk,
        ActivityLabel::Stand,
        ActivityLabel::StairUp,
        ActivityLabel::StairDown,
        ActivityLabel::Sit,
        ActivityLabel::SitToStand,
        ActivityLabel::StandToSit,
    ];

    /// All labels, including the truth-only out-of-dictionary value.
    pub const ALL: [ActivityLabel; 8] = [
        ActivityLabel::Walk,
        ActivityLabel::Stand,
        ActivityLabel::StairUp,
        ActivityLabel::StairDown,
        ActivityLabel::Sit,
        ActivityLabel::SitToStand,
        ActivityLabel::StandToSit,
        ActivityLabel::OutOfDictionary,
    ];

    /// True for the seven activities that may appear in predictions.
    pub fn is_dictionary(self) -> bool {
        self != ActivityLabel::OutOfDictionary
    }

    /// Position in the canonical enumeration order.
    pub fn ordinal(self) -> usize {
        self as usize
    }

    /// Canonical string form, matching the label CSV enumeration.
    pub fn as_str(self) -> &'static str {
        match self {
            ActivityLabel::Walk => "walk",
            ActivityLabel::Stand => "stand",
            ActivityLabel::StairUp => "stairUp",
            ActivityLabel::StairDown => "stairDown",
            ActivityLabel::Sit => "sit",
            ActivityLabel::SitToStand => "sitToStand",
            ActivityLabel::StandToSit => "standToSit",
            ActivityLabel::OutOfDictionary => "revolvingDoor",
        }
    }
}

impl fmt::Display for ActivityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ActivityLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ActivityLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown activity label {s:?}"))
    }
}

/// The two smartphone sensors this crate understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SensorKind {
    #[serde(rename = "accelerometer")]
    Accelerometer,
    #[serde(rename = "gyroscope")]
    Gyroscope,
}

impl SensorKind {
    /// Measurement unit, fixed by the sensor kind.
    pub fn unit(self) -> &'static str {
        match self {
            SensorKind::Accelerometer => "g",
            SensorKind::Gyroscope => "rad/s",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SensorKind::Accelerometer => "accelerometer",
            SensorKind::Gyroscope => "gyroscope",
        }
    }
}

impl fmt::Display for SensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One timestamped tri-axial measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Seconds. Monotone within a series.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Sample {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Sample { t, x, y, z }
    }

    /// Value of axis 0, 1, or 2 (x, y, z).
    pub fn axis(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {axis} out of range"),
        }
    }
}

/// Check that timestamps strictly increase and every value is finite.
///
/// This is the single validation rule behind [`TriaxialSeries`]; it is
/// exposed so callers can vet raw sample buffers before construction.
pub fn validate_samples(samples: &[Sample]) -> Result<()> {
    for (index, s) in samples.iter().enumerate() {
        for (field, v) in [("t", s.t), ("x", s.x), ("y", s.y), ("z", s.z)] {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index, field });
            }
        }
        if index > 0 && s.t <= samples[index - 1].t {
            return Err(Error::NonMonotoneTimestamps { index, t: s.t });
        }
    }
    Ok(())
}

/// A timestamped (x, y, z) stream from one sensor; the raw unit of ingestion.
///
/// Construction validates the stream, so a `TriaxialSeries` always has
/// strictly increasing timestamps and finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TriaxialSeries {
    kind: SensorKind,
    samples: Vec<Sample>,
    nominal_rate: f64,
}

impl TriaxialSeries {
    /// Build a validated series. `nominal_rate` is the advertised sampling
    /// frequency in Hz (10 for this study's data); actual timestamps may
    /// jitter around it.
    pub fn new(kind: SensorKind, samples: Vec<Sample>, nominal_rate: f64) -> Result<Self> {
        validate_samples(&samples)?;
        Ok(TriaxialSeries {
            kind,
            samples,
            nominal_rate,
        })
    }

    pub fn kind(&self) -> SensorKind {
        self.kind
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn nominal_rate(&self) -> f64 {
        self.nominal_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first_t(&self) -> Option<f64> {
        self.samples.first().map(|s| s.t)
    }

    pub fn last_t(&self) -> Option<f64> {
        self.samples.last().map(|s| s.t)
    }

    /// Timestamps as a contiguous vector.
    pub fn timestamps(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// One axis as a contiguous vector (axis 0, 1, or 2).
    pub fn axis_values(&self, axis: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.axis(axis)).collect()
    }

    /// Copy of a contiguous sample range as a new series.
    pub fn slice(&self, range: std::ops::Range<usize>) -> TriaxialSeries {
        TriaxialSeries {
            kind: self.kind,
            samples: self.samples[range].to_vec(),
            nominal_rate: self.nominal_rate,
        }
    }

    /// Same series with every timestamp shifted by `offset` seconds.
    pub fn shifted(&self, offset: f64) -> TriaxialSeries {
        TriaxialSeries {
            kind: self.kind,
            samples: self
                .samples
                .iter()
                .map(|s| Sample::new(s.t + offset, s.x, s.y, s.z))
                .collect(),
            nominal_rate: self.nominal_rate,
        }
    }
}

/// Channel order of a [`SyncedSeries`] and of 6-channel movelets:
/// accelerometer x, y, z then gyroscope x, y, z.
pub const SYNCED_CHANNELS: usize = 6;

/// A 6-channel series on a shared accelerometer timeline; input to
/// joint-sensor analysis. Channels are ordered accel (x, y, z) then
/// gyro (x, y, z).
#[derive(Debug, Clone, PartialEq)]
pub struct SyncedSeries {
    timestamps: Vec<f64>,
    channels: [Vec<f64>; SYNCED_CHANNELS],
}

impl SyncedSeries {
    pub fn new(timestamps: Vec<f64>, channels: [Vec<f64>; SYNCED_CHANNELS]) -> Result<Self> {
        for ch in &channels {
            if ch.len() != timestamps.len() {
                return Err(Error::LengthMismatch {
                    left: ch.len(),
                    right: timestamps.len(),
                });
            }
        }
        Ok(SyncedSeries {
            timestamps,
            channels,
        })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn channels(&self) -> &[Vec<f64>; SYNCED_CHANNELS] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Copy of a contiguous range as a new synced series.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SyncedSeries {
        SyncedSeries {
            timestamps: self.timestamps[range.clone()].to_vec(),
            channels: std::array::from_fn(|c| self.channels[c][range.clone()].to_vec()),
        }
    }
}

/// A fixed-length window of 3- or 6-channel data; the unit of matching.
///
/// The window length is a sample count, not a wall-clock duration: at the
/// study's 10 Hz rate a one-second window is exactly 10 samples, and the
/// data's timestamp jitter makes the sample-count definition the only
/// reproducible one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Movelet {
    start_index: usize,
    timestamps: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl Movelet {
    /// Build a movelet from per-channel value vectors. Channel count must
    /// be 3 or 6 and every channel must match the timestamp length.
    pub fn from_channels(
        start_index: usize,
        timestamps: Vec<f64>,
        values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if values.len() != 3 && values.len() != SYNCED_CHANNELS {
            return Err(Error::BadChannelCount(values.len()));
        }
        for ch in &values {
            if ch.len() != timestamps.len() {
                return Err(Error::LengthMismatch {
                    left: ch.len(),
                    right: timestamps.len(),
                });
            }
        }
        Ok(Movelet {
            start_index,
            timestamps,
            values,
        })
    }

    /// Position of the window's first sample in the source series.
    pub fn start_index(&self) -> usize {
        self.start_index
    }

    /// Source timestamps covered by the window.
    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    /// Per-channel values, `channel_count()` vectors of `window_len()` each.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.values[c]
    }

    pub fn channel_count(&self) -> usize {
        self.values.len()
    }

    /// Samples per channel (n).
    pub fn window_len(&self) -> usize {
        self.timestamps.len()
    }
}

impl<'de> Deserialize<'de> for Movelet {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            start_index: usize,
            timestamps: Vec<f64>,
            values: Vec<Vec<f64>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Movelet::from_channels(raw.start_index, raw.timestamps, raw.values)
            .map_err(serde::de::Error::custom)
    }
}

/// A per-person map from activity label to its training movelets.
///
/// Entries are held in the canonical [`ActivityLabel`] enumeration order,
/// which fixes the iteration order used for deterministic tie-breaking
/// during matching. All movelets share one channel count (3 or 6) and one
/// window length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dictionary {
    participant: String,
    channels: usize,
    window_len: usize,
    entries: Vec<(ActivityLabel, Vec<Movelet>)>,
}

impl Dictionary {
    pub fn new(
        participant: impl Into<String>,
        entries: Vec<(ActivityLabel, Vec<Movelet>)>,
    ) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by_key(|(label, _)| label.ordinal());

        let mut channels = None;
        let mut window_len = None;
        for (label, movelets) in &entries {
            if !label.is_dictionary() {
                return Err(Error::NonDictionaryLabel { label: *label });
            }
            for m in movelets {
                let c = *channels.get_or_insert(m.channel_count());
                if m.channel_count() != c {
                    return Err(Error::ChannelMismatch {
                        left: m.channel_count(),
                        right: c,
                    });
                }
                let n = *window_len.get_or_insert(m.window_len());
                if m.window_len() != n {
                    return Err(Error::LengthMismatch {
                        left: m.window_len(),
                        right: n,
                    });
                }
            }
        }
        let (channels, window_len) = match (channels, window_len) {
            (Some(c), Some(n)) => (c, n),
            _ => return Err(Error::EmptyDictionary),
        };
        Ok(Dictionary {
            participant: participant.into(),
            channels,
            window_len,
            entries,
        })
    }

    pub fn participant(&self) -> &str {
        &self.participant
    }

    /// Channel count shared by every movelet (3 or 6).
    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Samples per movelet channel (n).
    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// Entries in canonical label order.
    pub fn entries(&self) -> &[(ActivityLabel, Vec<Movelet>)] {
        &self.entries
    }

    pub fn get(&self, label: ActivityLabel) -> Option<&[Movelet]> {
        self.entries
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, m)| m.as_slice())
    }

    pub fn total_movelets(&self) -> usize {
        self.entries.iter().map(|(_, m)| m.len()).sum()
    }

    /// All movelets in matching order: labels in enumeration order, then
    /// movelet index within the entry.
    pub fn iter_movelets(&self) -> impl Iterator<Item = (ActivityLabel, usize, &Movelet)> {
        self.entries
            .iter()
            .flat_map(|(label, ms)| ms.iter().enumerate().map(move |(i, m)| (*label, i, m)))
    }
}

impl<'de> Deserialize<'de> for Dictionary {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            participant: String,
            entries: Vec<(ActivityLabel, Vec<Movelet>)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Dictionary::new(raw.participant, raw.entries).map_err(serde::de::Error::custom)
    }
}

/// One classified instant: a timestamp, the predicted activity, and the
/// annotated ground truth (`None` where the recording was not annotated).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub t: f64,
    pub predicted: ActivityLabel,
    pub truth: Option<ActivityLabel>,
}

/// Per-timestamp predicted labels plus ground truth; input to evaluation.
///
/// Predictions are always dictionary activities; truth may be
/// out-of-dictionary or absent (unannotated instants are carried so
/// exports stay gap-free, and evaluation excludes and counts them).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedTimeline {
    points: Vec<ClassifiedPoint>,
}

impl ClassifiedTimeline {
    pub fn new(points: Vec<ClassifiedPoint>) -> Result<Self> {
        for (index, p) in points.iter().enumerate() {
            if !p.predicted.is_dictionary() {
                return Err(Error::PredictedOutOfDictionary { label: p.predicted });
            }
            if index > 0 && p.t <= points[index - 1].t {
                return Err(Error::NonMonotoneTimestamps { index, t: p.t });
            }
        }
        Ok(ClassifiedTimeline { points })
    }

    pub fn points(&self) -> &[ClassifiedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points whose truth is annotated.
    pub fn labeled_points(&self) -> impl Iterator<Item = (&ClassifiedPoint, ActivityLabel)> {
        self.points.iter().filter_map(|p| p.truth.map(|t| (p, t)))
    }
}

impl<'de> Deserialize<'de> for ClassifiedTimeline {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<ClassifiedPoint>,
        }
        let raw = Raw::deserialize(deserializer)?;
        ClassifiedTimeline::new(raw.points).map_err(serde::de::Error::custom)
    }
}
