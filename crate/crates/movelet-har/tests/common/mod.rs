//! Shared fixtures for integration tests: deterministic synthetic sensor
//! signals, recordings, and on-disk mini-datasets.

#![allow(dead_code)]

pub mod oracle;

use std::f64::consts::TAU;
use std::path::Path;

use movelet_har::ingest::{write_sensor_csv, ColumnMapping, LabeledInterval, Recording, StepId};
use movelet_har::model::{ActivityLabel, Sample, SensorKind, TriaxialSeries};

pub const RATE: f64 = 10.0;
pub const GYRO_OFFSET: f64 = 0.04;

/// Deterministic per-activity waveform. Activities are mutually
/// distinguishable on both sensors, stationary activities are near-flat,
/// and a small time-varying term keeps movelets within an entry distinct.
pub fn signal(kind: SensorKind, label: ActivityLabel, axis: usize, t: f64) -> f64 {
    let jitter = 0.01 * (37.0 * t + axis as f64 * 1.3 + label.ordinal() as f64 * 0.7).sin();
    let base = match (kind, label) {
        (SensorKind::Accelerometer, ActivityLabel::Stand) => [-0.15, 0.98, 0.02][axis],
        (SensorKind::Accelerometer, ActivityLabel::Sit) => [-0.73, 0.26, 0.64][axis],
        (SensorKind::Gyroscope, ActivityLabel::Stand) => 0.02,
        (SensorKind::Gyroscope, ActivityLabel::Sit) => -0.02,
        (kind, label) => {
            // quasi-periodic motion with per-activity frequency and level
            let k = label.ordinal() as f64;
            let (freq, amp) = match label {
                ActivityLabel::Walk => (1.8, 0.9),
                ActivityLabel::StairUp => (1.3, 0.7),
                ActivityLabel::StairDown => (1.6, 0.8),
                ActivityLabel::SitToStand => (0.4, 0.5),
                ActivityLabel::StandToSit => (0.5, 0.6),
                // out-of-dictionary movement (revolving door)
                _ => (0.9, 0.4),
            };
            let sensor_shift = match kind {
                SensorKind::Accelerometer => 0.0,
                SensorKind::Gyroscope => 0.9,
            };
            amp * (TAU * freq * t + axis as f64 * 1.1 + sensor_shift).sin() + 0.2 * k
        }
    };
    base + jitter
}

fn series_for(
    kind: SensorKind,
    schedule: &[(ActivityLabel, f64)],
    t_offset: f64,
) -> TriaxialSeries {
    let mut samples = Vec::new();
    let mut t0 = 0.0;
    for &(label, seconds) in schedule {
        let count = (seconds * RATE).round() as usize;
        for i in 0..count {
            let t = t0 + i as f64 / RATE + t_offset;
            samples.push(Sample::new(
                t,
                signal(kind, label, 0, t),
                signal(kind, label, 1, t),
                signal(kind, label, 2, t),
            ));
        }
        t0 += seconds;
    }
    TriaxialSeries::new(kind, samples, RATE).unwrap()
}

fn intervals_for(schedule: &[(ActivityLabel, f64)]) -> Vec<LabeledInterval> {
    let mut intervals = Vec::new();
    let mut t0 = 0.0;
    for &(label, seconds) in schedule {
        intervals.push(LabeledInterval {
            start: t0,
            end: t0 + seconds,
            label,
        });
        t0 += seconds;
    }
    intervals
}

/// A recording following `schedule`, with the gyroscope stream offset by
/// [`GYRO_OFFSET`] seconds when present.
pub fn recording_for(schedule: &[(ActivityLabel, f64)], with_gyro: bool) -> Recording {
    Recording {
        accel: Some(series_for(SensorKind::Accelerometer, schedule, 0.0)),
        gyro: with_gyro.then(|| series_for(SensorKind::Gyroscope, schedule, GYRO_OFFSET)),
        intervals: intervals_for(schedule),
    }
}

/// The standard training schedule: every dictionary activity, six seconds
/// each except the momentary transitions.
pub fn training_schedule() -> Vec<(ActivityLabel, f64)> {
    ActivityLabel::DICTIONARY
        .iter()
        .map(|&label| {
            let seconds = match label {
                ActivityLabel::SitToStand | ActivityLabel::StandToSit => 1.5,
                _ => 6.0,
            };
            (label, seconds)
        })
        .collect()
}

/// Short per-step test schedules covering all activities across the five
/// steps, including a revolving-door period in step 5.
pub fn step_schedule(step: StepId) -> Vec<(ActivityLabel, f64)> {
    use ActivityLabel::*;
    match step.value() {
        1 => vec![(Stand, 3.0), (StairDown, 4.0), (Walk, 6.0), (StairUp, 4.0)],
        2 => vec![
            (Stand, 2.0),
            (Walk, 4.0),
            (StandToSit, 1.5),
            (Sit, 4.0),
            (SitToStand, 1.5),
            (Walk, 3.0),
        ],
        3 => vec![(Walk, 8.0), (Stand, 2.0), (Walk, 5.0)],
        5 => vec![
            (StairDown, 3.0),
            (Walk, 5.0),
            (StairUp, 3.0),
            (OutOfDictionary, 2.0),
        ],
        6 => vec![(StairUp, 5.0), (Stand, 2.0), (StairDown, 5.0)],
        other => panic!("no schedule for step {other}"),
    }
}

fn write_labels_csv(path: &Path, intervals: &[LabeledInterval]) {
    let mut text = String::from("start,end,label\n");
    for iv in intervals {
        text.push_str(&format!("{},{},{}\n", iv.start, iv.end, iv.label));
    }
    std::fs::write(path, text).unwrap();
}

fn write_recording(dir: &Path, schedule: &[(ActivityLabel, f64)], unlabeled_gap: Option<usize>) {
    std::fs::create_dir_all(dir).unwrap();
    let mapping = ColumnMapping::default();
    let accel = series_for(SensorKind::Accelerometer, schedule, 0.0);
    let gyro = series_for(SensorKind::Gyroscope, schedule, GYRO_OFFSET);
    write_sensor_csv(&accel, &dir.join("accel.csv"), &mapping).unwrap();
    write_sensor_csv(&gyro, &dir.join("gyro.csv"), &mapping).unwrap();

    let mut intervals = intervals_for(schedule);
    // drop one interval so some samples are unannotated
    if let Some(idx) = unlabeled_gap {
        if idx < intervals.len() {
            intervals.remove(idx);
        }
    }
    write_labels_csv(&dir.join("labels.csv"), &intervals);
}

/// Write a full synthetic dataset in the canonical layout.
pub fn write_dataset(root: &Path, participants: &[u32], steps: &[StepId]) {
    for &participant in participants {
        let pdir = root.join(format!("participant{participant}"));
        write_recording(&pdir.join("training"), &training_schedule(), None);
        for &step in steps {
            // step 3 gets an unannotated stretch (interval 1 dropped)
            let gap = (step.value() == 3).then_some(1);
            write_recording(&pdir.join(step.dir_name()), &step_schedule(step), gap);
        }
    }
}
