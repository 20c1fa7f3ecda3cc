//! Dataset ingestion: sensor CSV parsing, ground-truth label attachment,
//! and training-segment extraction.
//!
//! Sensor files are header-plus-rows CSV with a timestamp column and one
//! column per axis; a [`ColumnMapping`] adapts the expected header names
//! to whatever the published files use. Label files are `start,end,label`
//! rows with labels from the canonical string enumeration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActivityLabel, Sample, SensorKind, TriaxialSeries};

/// Header names of the four sensor CSV columns. Defaults match this
/// crate's canonical layout; override to consume files whose headers
/// differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMapping {
    pub timestamp: String,
    pub x: String,
    pub y: String,
    pub z: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            timestamp: "timestamp".into(),
            x: "x".into(),
            y: "y".into(),
            z: "z".into(),
        }
    }
}

/// A ground-truth annotation: activity `label` over `[start, end)` seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledInterval {
    pub start: f64,
    pub end: f64,
    pub label: ActivityLabel,
}

impl LabeledInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }

    fn shifted(&self, offset: f64) -> LabeledInterval {
        LabeledInterval {
            start: self.start + offset,
            end: self.end + offset,
            label: self.label,
        }
    }
}

/// Test-course step identifier. Steps 1, 2, 3, 5, and 6 carry analyzable
/// data; step 4 (phone reorientation) is rejected outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct StepId(u8);

impl StepId {
    pub const ALL: [StepId; 5] = [StepId(1), StepId(2), StepId(3), StepId(5), StepId(6)];

    pub fn new(id: u8) -> Result<Self> {
        match id {
            1 | 2 | 3 | 5 | 6 => Ok(StepId(id)),
            other => Err(Error::InvalidStep(other)),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Directory name used in the dataset layout and artifact paths.
    pub fn dir_name(self) -> String {
        format!("step{}", self.0)
    }
}

impl TryFrom<u8> for StepId {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        StepId::new(v)
    }
}

impl From<StepId> for u8 {
    fn from(s: StepId) -> u8 {
        s.0
    }
}

impl std::fmt::Display for StepId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One recording session: the sensor streams that were loaded plus the
/// ground-truth intervals. A stream is `None` when the analysis mode did
/// not require it, which keeps single-sensor runs independent of the
/// other sensor's files.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub accel: Option<TriaxialSeries>,
    pub gyro: Option<TriaxialSeries>,
    pub intervals: Vec<LabeledInterval>,
}

impl Recording {
    pub fn require_accel(&self) -> Result<&TriaxialSeries> {
        self.accel.as_ref().ok_or(Error::MissingSensor {
            kind: SensorKind::Accelerometer,
        })
    }

    pub fn require_gyro(&self) -> Result<&TriaxialSeries> {
        self.gyro.as_ref().ok_or(Error::MissingSensor {
            kind: SensorKind::Gyroscope,
        })
    }

    /// Shift all timestamps so the first accelerometer sample (or first
    /// gyroscope sample if no accelerometer was loaded) sits at t = 0.
    /// Both streams and the intervals shift together, preserving their
    /// relative alignment.
    pub fn rebased(self) -> Recording {
        let base = self
            .accel
            .as_ref()
            .and_then(|s| s.first_t())
            .or_else(|| self.gyro.as_ref().and_then(|s| s.first_t()));
        let Some(base) = base else { return self };
        Recording {
            accel: self.accel.map(|s| s.shifted(-base)),
            gyro: self.gyro.map(|s| s.shifted(-base)),
            intervals: self.intervals.iter().map(|iv| iv.shifted(-base)).collect(),
        }
    }
}

/// One test-course step of one participant.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyStep {
    pub id: StepId,
    pub recording: Recording,
}

/// A series with a ground-truth label (or `None`) per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    series: TriaxialSeries,
    labels: Vec<Option<ActivityLabel>>,
}

impl LabeledSeries {
    pub fn series(&self) -> &TriaxialSeries {
        &self.series
    }

    pub fn labels(&self) -> &[Option<ActivityLabel>] {
        &self.labels
    }
}

/// Parse a sensor CSV into a validated series. Column order in the file is
/// irrelevant; columns are found by the header names in `mapping`. Row
/// order is preserved.
pub fn parse_sensor_csv(
    path: &Path,
    kind: SensorKind,
    mapping: &ColumnMapping,
    nominal_rate: f64,
) -> Result<TriaxialSeries> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_open_error(&display, e))?;

    let headers = reader
        .headers()
        .map_err(|e| malformed(&display, 1, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            malformed(
                &display,
                1,
                format!("missing column {name:?} (headers: {headers:?})"),
            )
        })
    };
    let cols = [
        col(&mapping.timestamp)?,
        col(&mapping.x)?,
        col(&mapping.y)?,
        col(&mapping.z)?,
    ];

    let mut samples = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2; // 1-based, after the header
        let record = record.map_err(|e| malformed(&display, line, e.to_string()))?;
        let mut fields = [0.0f64; 4];
        for (slot, &c) in fields.iter_mut().zip(&cols) {
            let raw = record.get(c).ok_or_else(|| {
                malformed(
                    &display,
                    line,
                    format!("expected at least {} columns, got {}", c + 1, record.len()),
                )
            })?;
            *slot = raw
                .parse()
                .map_err(|_| malformed(&display, line, format!("unparseable number {raw:?}")))?;
        }
        samples.push(Sample::new(fields[0], fields[1], fields[2], fields[3]));
    }
    TriaxialSeries::new(kind, samples, nominal_rate)
}

/// Write a series back out in the canonical `timestamp,x,y,z` format.
/// Values are written in shortest round-trip form, so parsing the output
/// reproduces the samples exactly.
pub fn write_sensor_csv(series: &TriaxialSeries, path: &Path, mapping: &ColumnMapping) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_open_error(&path.display().to_string(), e))?;
    writer
        .write_record([&mapping.timestamp, &mapping.x, &mapping.y, &mapping.z])
        .map_err(io_from_csv)?;
    for s in series.samples() {
        writer
            .write_record([
                s.t.to_string(),
                s.x.to_string(),
                s.y.to_string(),
                s.z.to_string(),
            ])
            .map_err(io_from_csv)?;
    }
    writer.flush()?;
    Ok(())
}

/// Parse a `start,end,label` annotation CSV.
pub fn parse_label_csv(path: &Path) -> Result<Vec<LabeledInterval>> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_open_error(&display, e))?;

    let mut intervals = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx as u64 + 2;
        let record = record.map_err(|e| malformed(&display, line, e.to_string()))?;
        if record.len() != 3 {
            return Err(malformed(
                &display,
                line,
                format!("expected 3 columns (start,end,label), got {}", record.len()),
            ));
        }
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| malformed(&display, line, format!("unparseable number {:?}", &record[i])))
        };
        let start = num(0)?;
        let end = num(1)?;
        let label: ActivityLabel = record[2]
            .parse()
            .map_err(|e| malformed(&display, line, e))?;
        if !(start < end) {
            return Err(malformed(
                &display,
                line,
                format!("interval start {start} not before end {end}"),
            ));
        }
        intervals.push(LabeledInterval { start, end, label });
    }
    Ok(intervals)
}

fn malformed(path: &str, line: u64, reason: impl Into<String>) -> Error {
    Error::MalformedRow {
        path: path.to_string(),
        line,
        reason: reason.into(),
    }
}

fn csv_open_error(path: &str, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::file(path, io),
        other => malformed(path, 0, format!("{other:?}")),
    }
}

fn io_from_csv(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::MalformedRow {
            path: String::new(),
            line: 0,
            reason: format!("{other:?}"),
        },
    }
}

/// Check that intervals are mutually non-overlapping. Touching endpoints
/// (`[0,1)` then `[1,2)`) are fine.
pub fn validate_intervals(intervals: &[LabeledInterval]) -> Result<()> {
    let mut sorted: Vec<&LabeledInterval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
    for pair in sorted.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(Error::OverlappingIntervals {
                first_start: pair[0].start,
                first_end: pair[0].end,
                second_start: pair[1].start,
                second_end: pair[1].end,
            });
        }
    }
    Ok(())
}

/// Ground-truth label for each timestamp: the label of the interval
/// containing it, or `None` outside every interval.
pub fn labels_for_timestamps(
    timestamps: &[f64],
    intervals: &[LabeledInterval],
) -> Result<Vec<Option<ActivityLabel>>> {
    validate_intervals(intervals)?;
    let mut sorted: Vec<&LabeledInterval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
    let starts: Vec<f64> = sorted.iter().map(|iv| iv.start).collect();

    Ok(timestamps
        .iter()
        .map(|&t| {
            let idx = starts.partition_point(|&s| s <= t);
            idx.checked_sub(1)
                .map(|i| sorted[i])
                .filter(|iv| iv.contains(t))
                .map(|iv| iv.label)
        })
        .collect())
}

/// Attach ground-truth labels to every sample of a series. Samples outside
/// every interval are marked unlabeled and excluded from evaluation later.
pub fn attach_labels(series: TriaxialSeries, intervals: &[LabeledInterval]) -> Result<LabeledSeries> {
    let labels = labels_for_timestamps(&series.timestamps(), intervals)?;
    Ok(LabeledSeries { series, labels })
}

/// First contiguous run of `activity` in `labels`, capped at `max_samples`
/// from the front. `None` if the activity never appears.
pub fn first_labeled_run(
    labels: &[Option<ActivityLabel>],
    activity: ActivityLabel,
    max_samples: usize,
) -> Option<std::ops::Range<usize>> {
    let start = labels.iter().position(|l| *l == Some(activity))?;
    let len = labels[start..]
        .iter()
        .take_while(|l| **l == Some(activity))
        .count();
    Some(start..start + len.min(max_samples))
}

/// Extract a training segment: the first contiguous run of `activity`,
/// truncated to at most `max_duration` seconds of samples at the series'
/// nominal rate. Momentary transitions shorter than the cap come back
/// whole.
pub fn extract_training_segment(
    labeled: &LabeledSeries,
    activity: ActivityLabel,
    max_duration: f64,
) -> Result<TriaxialSeries> {
    let max_samples = duration_to_samples(max_duration, labeled.series.nominal_rate());
    let run = first_labeled_run(labeled.labels(), activity, max_samples)
        .ok_or(Error::ActivityAbsent { label: activity })?;
    Ok(labeled.series.slice(run))
}

/// Samples covered by `seconds` at `rate` Hz, as a window cap.
pub fn duration_to_samples(seconds: f64, rate: f64) -> usize {
    (seconds * rate).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_minimal_file() {
        let f = temp_csv("timestamp,x,y,z\n0.0,0.1,0.2,0.3\n0.1,0.4,0.5,0.6\n0.2,0.7,0.8,0.9\n");
        let series = parse_sensor_csv(
            f.path(),
            SensorKind::Accelerometer,
            &ColumnMapping::default(),
            10.0,
        )
        .unwrap();
        assert_eq!(series.len(), 3);
        assert_eq!(series.samples()[1], Sample::new(0.1, 0.4, 0.5, 0.6));
    }

    #[test]
    fn short_row_is_malformed() {
        let f = temp_csv("timestamp,x,y,z\n0.1,0.0\n");
        let err = parse_sensor_csv(
            f.path(),
            SensorKind::Accelerometer,
            &ColumnMapping::default(),
            10.0,
        );
        match err {
            Err(Error::MalformedRow { line: 2, .. }) => {}
            other => panic!("expected MalformedRow at line 2, got {other:?}"),
        }
    }

    #[test]
    fn unparseable_number_is_malformed() {
        let f = temp_csv("timestamp,x,y,z\n0.0,a,0.0,0.0\n");
        assert!(matches!(
            parse_sensor_csv(
                f.path(),
                SensorKind::Accelerometer,
                &ColumnMapping::default(),
                10.0
            ),
            Err(Error::MalformedRow { line: 2, .. })
        ));
    }

    #[test]
    fn backwards_time_fails_validation() {
        let f = temp_csv("timestamp,x,y,z\n0.1,0,0,0\n0.0,0,0,0\n");
        assert!(matches!(
            parse_sensor_csv(
                f.path(),
                SensorKind::Accelerometer,
                &ColumnMapping::default(),
                10.0
            ),
            Err(Error::NonMonotoneTimestamps { .. })
        ));
    }

    #[test]
    fn column_mapping_finds_renamed_headers() {
        let f = temp_csv("UTC time,accel_x,accel_y,accel_z\n0.0,1,2,3\n");
        let mapping = ColumnMapping {
            timestamp: "UTC time".into(),
            x: "accel_x".into(),
            y: "accel_y".into(),
            z: "accel_z".into(),
        };
        let series =
            parse_sensor_csv(f.path(), SensorKind::Accelerometer, &mapping, 10.0).unwrap();
        assert_eq!(series.samples()[0], Sample::new(0.0, 1.0, 2.0, 3.0));
    }

    #[test]
    fn missing_header_is_reported() {
        let f = temp_csv("timestamp,x,y\n0.0,1,2\n");
        let err = parse_sensor_csv(
            f.path(),
            SensorKind::Accelerometer,
            &ColumnMapping::default(),
            10.0,
        );
        assert!(matches!(err, Err(Error::MalformedRow { line: 1, .. })));
    }

    fn series_at_10hz(count: usize) -> TriaxialSeries {
        let samples = (0..count)
            .map(|i| Sample::new(i as f64 * 0.1, i as f64, 0.0, 0.0))
            .collect();
        TriaxialSeries::new(SensorKind::Accelerometer, samples, 10.0).unwrap()
    }

    fn iv(start: f64, end: f64, label: ActivityLabel) -> LabeledInterval {
        LabeledInterval { start, end, label }
    }

    #[test]
    fn labels_attach_within_interval() {
        let labeled =
            attach_labels(series_at_10hz(10), &[iv(0.0, 1.0, ActivityLabel::Walk)]).unwrap();
        assert!(labeled
            .labels()
            .iter()
            .all(|l| *l == Some(ActivityLabel::Walk)));
    }

    #[test]
    fn sample_outside_coverage_is_unlabeled() {
        // samples at 0.0 .. 1.9; interval ends at 1.0
        let labeled =
            attach_labels(series_at_10hz(20), &[iv(0.0, 1.0, ActivityLabel::Walk)]).unwrap();
        assert_eq!(labeled.labels()[9], Some(ActivityLabel::Walk)); // 0.9
        assert_eq!(labeled.labels()[10], None); // 1.0: half-open end
        assert_eq!(labeled.labels()[15], None); // 1.5
    }

    #[test]
    fn overlapping_intervals_rejected() {
        let err = attach_labels(
            series_at_10hz(10),
            &[
                iv(0.0, 1.0, ActivityLabel::Walk),
                iv(0.5, 2.0, ActivityLabel::Stand),
            ],
        );
        assert!(matches!(err, Err(Error::OverlappingIntervals { .. })));
    }

    #[test]
    fn touching_intervals_allowed() {
        let labeled = attach_labels(
            series_at_10hz(20),
            &[
                iv(0.0, 1.0, ActivityLabel::Walk),
                iv(1.0, 2.0, ActivityLabel::Stand),
            ],
        )
        .unwrap();
        assert_eq!(labeled.labels()[9], Some(ActivityLabel::Walk));
        assert_eq!(labeled.labels()[10], Some(ActivityLabel::Stand));
    }

    #[test]
    fn training_segment_capped_at_five_seconds() {
        // 8 s of Walk labels at 10 Hz, cap 5 s -> 50 samples
        let labeled =
            attach_labels(series_at_10hz(80), &[iv(0.0, 8.0, ActivityLabel::Walk)]).unwrap();
        let seg = extract_training_segment(&labeled, ActivityLabel::Walk, 5.0).unwrap();
        assert_eq!(seg.len(), 50);
        assert_eq!(seg.samples()[0].t, 0.0); // truncated from the front
    }

    #[test]
    fn short_transition_returned_whole() {
        // 0.9 s SitToStand run -> 9 samples, no truncation
        let labeled = attach_labels(
            series_at_10hz(30),
            &[
                iv(0.0, 1.0, ActivityLabel::Sit),
                iv(1.0, 1.9, ActivityLabel::SitToStand),
                iv(1.9, 3.0, ActivityLabel::Stand),
            ],
        )
        .unwrap();
        let seg = extract_training_segment(&labeled, ActivityLabel::SitToStand, 5.0).unwrap();
        assert_eq!(seg.len(), 9);
    }

    #[test]
    fn absent_activity_reported() {
        let labeled =
            attach_labels(series_at_10hz(10), &[iv(0.0, 1.0, ActivityLabel::Walk)]).unwrap();
        let err = extract_training_segment(&labeled, ActivityLabel::Stand, 5.0);
        assert!(matches!(
            err,
            Err(Error::ActivityAbsent {
                label: ActivityLabel::Stand
            })
        ));
    }

    #[test]
    fn first_run_wins_when_activity_recurs() {
        let labeled = attach_labels(
            series_at_10hz(40),
            &[
                iv(0.0, 1.0, ActivityLabel::Walk),
                iv(1.0, 2.0, ActivityLabel::Stand),
                iv(2.0, 4.0, ActivityLabel::Walk),
            ],
        )
        .unwrap();
        let seg = extract_training_segment(&labeled, ActivityLabel::Walk, 5.0).unwrap();
        assert_eq!(seg.len(), 10); // the first 1 s run, not the later 2 s run
        assert_eq!(seg.samples()[0].t, 0.0);
    }

    #[test]
    fn step_four_rejected() {
        assert!(StepId::new(3).is_ok());
        assert!(matches!(StepId::new(4), Err(Error::InvalidStep(4))));
        assert!(matches!(StepId::new(7), Err(Error::InvalidStep(7))));
    }

    #[test]
    fn rebase_shifts_streams_and_intervals_together() {
        let accel = series_at_10hz(10).shifted(100.0);
        let gyro = series_at_10hz(10).shifted(100.03);
        let rec = Recording {
            accel: Some(accel),
            gyro: Some(gyro),
            intervals: vec![iv(100.0, 100.5, ActivityLabel::Walk)],
        }
        .rebased();
        assert_eq!(rec.accel.as_ref().unwrap().first_t(), Some(0.0));
        let g0 = rec.gyro.as_ref().unwrap().first_t().unwrap();
        assert!((g0 - 0.03).abs() < 1e-9);
        assert_eq!(rec.intervals[0].start, 0.0);
    }

    proptest! {
        // Serializing a parsed series back to CSV and re-parsing yields
        // identical samples.
        #[test]
        fn csv_round_trip_is_exact(
            values in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0), 1..50),
            step in 0.01f64..1.0,
        ) {
            let samples: Vec<Sample> = values
                .iter()
                .enumerate()
                .map(|(i, &(x, y, z))| Sample::new(i as f64 * step, x, y, z))
                .collect();
            let series = TriaxialSeries::new(SensorKind::Gyroscope, samples, 10.0).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("series.csv");
            write_sensor_csv(&series, &path, &ColumnMapping::default()).unwrap();
            let reparsed = parse_sensor_csv(
                &path,
                SensorKind::Gyroscope,
                &ColumnMapping::default(),
                10.0,
            ).unwrap();
            prop_assert_eq!(reparsed.samples(), series.samples());
        }
    }
}
