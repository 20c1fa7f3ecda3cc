//! End-to-end experiment orchestration: ingest, dictionary building,
//! synchronization, classification, and evaluation for each participant
//! and analysis mode, plus the on-disk artifact bundle.
//!
//! The dataset layout is one directory per participant holding a
//! `training` directory and one `step<k>` directory per test step, each
//! with `accel.csv`, `gyro.csv`, and `labels.csv`. Single-sensor runs
//! read only the files they need, so an accelerometer-only analysis is
//! unaffected by missing or malformed gyroscope files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classify::{classify_series, map_to_accel_timestamps, Mode};
use crate::error::{Error, Result};
use crate::evaluate::{
    group_average_accuracy, percent_improvement, ActivityGroup, ConfusionMatrix,
    ConfusionMatrixView,
};
use crate::ingest::{
    attach_labels, duration_to_samples, extract_training_segment, first_labeled_run,
    labels_for_timestamps, parse_label_csv, parse_sensor_csv, validate_intervals, ColumnMapping,
    Recording, StepId,
};
use crate::model::{ActivityLabel, ClassifiedTimeline, Dictionary, SensorKind};
use crate::movelet::{extract_movelets, extract_movelets_synced, DEFAULT_WINDOW_SAMPLES};
use crate::sync::synchronize;

pub const ACCEL_FILE: &str = "accel.csv";
pub const GYRO_FILE: &str = "gyro.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const TRAINING_DIR: &str = "training";

/// Machine form of the analysis procedure: what to run, on which data,
/// with which parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset_root: PathBuf,
    pub output_root: PathBuf,
    pub participants: Vec<u32>,
    pub steps: Vec<StepId>,
    pub modes: Vec<Mode>,
    /// Samples per movelet window (n); 10 at the study's 10 Hz rate.
    pub window_samples: usize,
    /// Movelets per majority vote (V).
    pub vote_window: usize,
    /// Training data used per activity, in seconds.
    pub training_cap_seconds: f64,
    /// Advertised sampling frequency of the sensor files.
    pub sample_rate_hz: f64,
    pub columns: ColumnMapping,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset_root: PathBuf::from("dataset"),
            output_root: PathBuf::from("out"),
            participants: vec![1, 2, 3, 4],
            steps: StepId::ALL.to_vec(),
            modes: Mode::ALL.to_vec(),
            window_samples: DEFAULT_WINDOW_SAMPLES,
            vote_window: 10,
            training_cap_seconds: 5.0,
            sample_rate_hz: 10.0,
            columns: ColumnMapping::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.participants.is_empty() {
            return Err(Error::ConfigInvalid("participants is empty".into()));
        }
        if self.steps.is_empty() {
            return Err(Error::ConfigInvalid("steps is empty".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::ConfigInvalid("modes is empty".into()));
        }
        if self.window_samples < 1 {
            return Err(Error::ConfigInvalid("window_samples must be >= 1".into()));
        }
        if self.vote_window < 1 {
            return Err(Error::ConfigInvalid("vote_window must be >= 1".into()));
        }
        if !(self.training_cap_seconds > 0.0) {
            return Err(Error::ConfigInvalid(
                "training_cap_seconds must be positive".into(),
            ));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::ConfigInvalid("sample_rate_hz must be positive".into()));
        }
        Ok(())
    }

    /// Short content hash of the resolved configuration, embedded in every
    /// output file so artifact bundles are traceable to their settings.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn participant_dir(&self, participant: u32) -> PathBuf {
        self.dataset_root.join(format!("participant{participant}"))
    }

    pub fn training_dir(&self, participant: u32) -> PathBuf {
        self.participant_dir(participant).join(TRAINING_DIR)
    }

    pub fn step_dir(&self, participant: u32, step: StepId) -> PathBuf {
        self.participant_dir(participant).join(step.dir_name())
    }
}

/// Which sensor files a recording load should touch.
#[derive(Debug, Clone, Copy)]
struct SensorNeeds {
    accel: bool,
    gyro: bool,
}

fn training_needs(mode: Mode) -> SensorNeeds {
    match mode {
        Mode::AccelOnly => SensorNeeds { accel: true, gyro: false },
        Mode::GyroOnly => SensorNeeds { accel: false, gyro: true },
        Mode::Joint => SensorNeeds { accel: true, gyro: true },
    }
}

fn test_needs(mode: Mode) -> SensorNeeds {
    match mode {
        Mode::AccelOnly => SensorNeeds { accel: true, gyro: false },
        // gyro-only classifications are mapped onto accelerometer
        // timestamps for evaluation, so the accelerometer file is read too
        Mode::GyroOnly => SensorNeeds { accel: true, gyro: true },
        Mode::Joint => SensorNeeds { accel: true, gyro: true },
    }
}

/// Load the training recording for one participant, reading only the
/// sensor files the mode needs.
pub fn load_training(config: &ExperimentConfig, participant: u32, mode: Mode) -> Result<Recording> {
    load_recording(&config.training_dir(participant), config, training_needs(mode))
}

/// Load one test step for one participant, reading only the sensor files
/// the mode needs. Gyro-only analyses also read the accelerometer file,
/// whose timestamps and annotations carry the evaluation.
pub fn load_step(
    config: &ExperimentConfig,
    participant: u32,
    step: StepId,
    mode: Mode,
) -> Result<Recording> {
    load_recording(&config.step_dir(participant, step), config, test_needs(mode))
}

fn load_recording(dir: &Path, config: &ExperimentConfig, needs: SensorNeeds) -> Result<Recording> {
    let accel = needs
        .accel
        .then(|| {
            parse_sensor_csv(
                &dir.join(ACCEL_FILE),
                SensorKind::Accelerometer,
                &config.columns,
                config.sample_rate_hz,
            )
        })
        .transpose()?;
    let gyro = needs
        .gyro
        .then(|| {
            parse_sensor_csv(
                &dir.join(GYRO_FILE),
                SensorKind::Gyroscope,
                &config.columns,
                config.sample_rate_hz,
            )
        })
        .transpose()?;
    let intervals = parse_label_csv(&dir.join(LABELS_FILE))?;
    validate_intervals(&intervals)?;
    Ok(Recording {
        accel,
        gyro,
        intervals,
    }
    .rebased())
}

/// Build a participant's dictionary for one analysis mode: one entry per
/// dictionary activity, each holding the movelets of the first labeled
/// training run capped at the training duration. Joint-mode entries come
/// from the synchronized 6-channel training data.
pub fn build_dictionary(
    training: &Recording,
    participant: &str,
    mode: Mode,
    window_samples: usize,
    training_cap_seconds: f64,
) -> Result<Dictionary> {
    let mut entries = Vec::with_capacity(ActivityLabel::DICTIONARY.len());
    match mode {
        Mode::AccelOnly | Mode::GyroOnly => {
            let series = match mode {
                Mode::AccelOnly => training.require_accel()?,
                _ => training.require_gyro()?,
            };
            let labeled = attach_labels(series.clone(), &training.intervals)?;
            for activity in ActivityLabel::DICTIONARY {
                let segment =
                    extract_training_segment(&labeled, activity, training_cap_seconds)?;
                entries.push((activity, extract_movelets(&segment, window_samples)?));
            }
        }
        Mode::Joint => {
            let accel = training.require_accel()?;
            let synced = synchronize(accel, training.require_gyro()?)?.series;
            let labels = labels_for_timestamps(synced.timestamps(), &training.intervals)?;
            let max_samples =
                duration_to_samples(training_cap_seconds, accel.nominal_rate());
            for activity in ActivityLabel::DICTIONARY {
                let run = first_labeled_run(&labels, activity, max_samples)
                    .ok_or(Error::ActivityAbsent { label: activity })?;
                let segment = synced.slice(run);
                entries.push((activity, extract_movelets_synced(&segment, window_samples)?));
            }
        }
    }
    Dictionary::new(participant, entries)
}

/// Classification output for one test step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub step: StepId,
    pub timeline: ClassifiedTimeline,
    /// Accelerometer samples clipped during synchronization (joint mode
    /// only; zero otherwise).
    pub clipped_head: usize,
    pub clipped_tail: usize,
}

/// Classify one loaded step. Gyro-only classifications are mapped onto
/// the accelerometer timestamps (closest gyroscope timestamp wins), so
/// all three methods are evaluated on the same timeline.
pub fn classify_step(
    config: &ExperimentConfig,
    recording: &Recording,
    dict: &Dictionary,
    mode: Mode,
    step: StepId,
) -> Result<StepResult> {
    let timeline = classify_series(recording, dict, mode, config.vote_window)?;
    let (timeline, clipped_head, clipped_tail) = match mode {
        Mode::GyroOnly => {
            let labeled_accel =
                attach_labels(recording.require_accel()?.clone(), &recording.intervals)?;
            (map_to_accel_timestamps(&timeline, &labeled_accel)?, 0, 0)
        }
        Mode::Joint => {
            let sync = synchronize(recording.require_accel()?, recording.require_gyro()?)?;
            (timeline, sync.clipped_head, sync.clipped_tail)
        }
        Mode::AccelOnly => (timeline, 0, 0),
    };
    Ok(StepResult {
        step,
        timeline,
        clipped_head,
        clipped_tail,
    })
}

/// Everything produced for one participant in one mode.
#[derive(Debug, Clone)]
pub struct ModeArtifacts {
    pub participant: u32,
    pub mode: Mode,
    pub steps: Vec<StepResult>,
    pub confusion: ConfusionMatrix,
    /// Group accuracies; `None` where a member activity never appears in
    /// the ground truth.
    pub group_accuracies: Vec<(ActivityGroup, Option<f64>)>,
}

/// A participant/mode combination that failed, with the error message.
/// Failures are isolated so one bad file does not void the whole run.
#[derive(Debug, Clone, Serialize)]
pub struct RunFailure {
    pub participant: u32,
    pub mode: Mode,
    pub message: String,
}

/// Result bundle of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config_hash: String,
    pub artifacts: Vec<ModeArtifacts>,
    pub failures: Vec<RunFailure>,
}

/// One row of the cross-method summary table.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub participant: u32,
    pub group: ActivityGroup,
    pub accel_only: Option<f64>,
    pub gyro_only: Option<f64>,
    pub joint: Option<f64>,
    /// Percent increase of joint accuracy over the better single sensor;
    /// present only when all three methods produced this group.
    pub improvement_pct: Option<f64>,
}

impl ExperimentOutcome {
    /// Per-participant, per-group accuracies of the three methods with the
    /// joint-over-best-single improvement.
    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        let mut by_key: BTreeMap<(u32, &str), BTreeMap<Mode, f64>> = BTreeMap::new();
        let mut participants: Vec<u32> = Vec::new();
        for artifact in &self.artifacts {
            if !participants.contains(&artifact.participant) {
                participants.push(artifact.participant);
            }
            for (group, accuracy) in &artifact.group_accuracies {
                if let Some(acc) = accuracy {
                    by_key
                        .entry((artifact.participant, group.as_str()))
                        .or_default()
                        .insert(artifact.mode, *acc);
                }
            }
        }
        let mut rows = Vec::new();
        for &participant in &participants {
            for group in ActivityGroup::ALL_GROUPS {
                let cell = by_key.get(&(participant, group.as_str()));
                let get = |mode| cell.and_then(|m| m.get(&mode).copied());
                let (accel, gyro, joint) =
                    (get(Mode::AccelOnly), get(Mode::GyroOnly), get(Mode::Joint));
                let improvement = match (accel, gyro, joint) {
                    (Some(a), Some(g), Some(j)) => percent_improvement(j, a, g).ok(),
                    _ => None,
                };
                rows.push(SummaryRow {
                    participant,
                    group,
                    accel_only: accel,
                    gyro_only: gyro,
                    joint,
                    improvement_pct: improvement,
                });
            }
        }
        rows
    }
}

fn run_participant_mode(
    config: &ExperimentConfig,
    participant: u32,
    mode: Mode,
) -> Result<ModeArtifacts> {
    let training = load_training(config, participant, mode)?;
    let dict = build_dictionary(
        &training,
        &participant.to_string(),
        mode,
        config.window_samples,
        config.training_cap_seconds,
    )?;

    let mut steps = Vec::with_capacity(config.steps.len());
    for &step in &config.steps {
        let recording = load_step(config, participant, step, mode)?;
        steps.push(classify_step(config, &recording, &dict, mode, step)?);
    }

    let timelines: Vec<ClassifiedTimeline> =
        steps.iter().map(|s| s.timeline.clone()).collect();
    let confusion = ConfusionMatrix::from_timelines(&timelines)?;
    let group_accuracies = ActivityGroup::ALL_GROUPS
        .into_iter()
        .map(|g| (g, group_average_accuracy(&confusion, g).ok()))
        .collect();

    Ok(ModeArtifacts {
        participant,
        mode,
        steps,
        confusion,
        group_accuracies,
    })
}

/// Run every configured participant x mode analysis. Tasks run in
/// parallel and independently; failures are collected per task rather
/// than aborting the rest. Output order follows the config order
/// regardless of scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    if !config.dataset_root.is_dir() {
        return Err(Error::DatasetMissing(config.dataset_root.clone()));
    }

    let tasks: Vec<(u32, Mode)> = config
        .participants
        .iter()
        .flat_map(|&p| config.modes.iter().map(move |&m| (p, m)))
        .collect();

    let results: Vec<Result<ModeArtifacts>> = tasks
        .par_iter()
        .map(|&(participant, mode)| run_participant_mode(config, participant, mode))
        .collect();

    let mut artifacts = Vec::new();
    let mut failures = Vec::new();
    for ((participant, mode), result) in tasks.into_iter().zip(results) {
        match result {
            Ok(a) => artifacts.push(a),
            Err(e) => failures.push(RunFailure {
                participant,
                mode,
                message: e.to_string(),
            }),
        }
    }

    Ok(ExperimentOutcome {
        config_hash: config.hash(),
        artifacts,
        failures,
    })
}

/// On-disk form of a built dictionary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DictionaryArtifact {
    pub config_hash: String,
    pub participant: u32,
    pub mode: Mode,
    pub dictionary: Dictionary,
}

/// Read a dictionary artifact back from disk.
pub fn read_dictionary_artifact(path: &Path) -> Result<DictionaryArtifact> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Write any artifact as JSON (compact when `pretty` is false).
pub fn write_json_artifact<T: Serialize>(path: &Path, value: &T, pretty: bool) -> Result<()> {
    write_json(path, value, pretty)
}

/// On-disk form of one step's classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimelineArtifact {
    pub config_hash: String,
    pub participant: u32,
    pub mode: Mode,
    pub step: u8,
    pub clipped_head: usize,
    pub clipped_tail: usize,
    pub timeline: ClassifiedTimeline,
}

#[derive(Debug, Clone, Serialize)]
struct ConfusionArtifact<'a> {
    config_hash: &'a str,
    participant: u32,
    mode: Mode,
    steps: Vec<u8>,
    matrix: ConfusionMatrixView,
    group_accuracies: Vec<GroupAccuracyCell>,
}

#[derive(Debug, Clone, Serialize)]
struct GroupAccuracyCell {
    group: ActivityGroup,
    accuracy: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct SummaryArtifact<'a> {
    config_hash: &'a str,
    rows: &'a [SummaryRow],
    failures: &'a [RunFailure],
}

/// Write the artifact bundle:
/// `participant<id>/<mode>/step<k>.timeline.json`, per-mode
/// `confusion.json`/`confusion.txt`, and `summary/table3.json`/`table3.txt`.
pub fn write_outcome(outcome: &ExperimentOutcome, out_root: &Path) -> Result<()> {
    for artifact in &outcome.artifacts {
        let mode_dir = out_root
            .join(format!("participant{}", artifact.participant))
            .join(artifact.mode.as_str());
        fs::create_dir_all(&mode_dir)?;

        for step in &artifact.steps {
            let file = TimelineArtifact {
                config_hash: outcome.config_hash.clone(),
                participant: artifact.participant,
                mode: artifact.mode,
                step: step.step.value(),
                clipped_head: step.clipped_head,
                clipped_tail: step.clipped_tail,
                timeline: step.timeline.clone(),
            };
            write_json(&mode_dir.join(format!("{}.timeline.json", step.step.dir_name())), &file, false)?;
        }

        let confusion = ConfusionArtifact {
            config_hash: &outcome.config_hash,
            participant: artifact.participant,
            mode: artifact.mode,
            steps: artifact.steps.iter().map(|s| s.step.value()).collect(),
            matrix: ConfusionMatrixView::from(&artifact.confusion),
            group_accuracies: artifact
                .group_accuracies
                .iter()
                .map(|&(group, accuracy)| GroupAccuracyCell { group, accuracy })
                .collect(),
        };
        write_json(&mode_dir.join("confusion.json"), &confusion, true)?;

        let mut text = format!(
            "participant {} / {} (config {})\n\n",
            artifact.participant, artifact.mode, outcome.config_hash
        );
        text.push_str(&artifact.confusion.render_text());
        fs::write(mode_dir.join("confusion.txt"), text)?;
    }

    let summary_dir = out_root.join("summary");
    fs::create_dir_all(&summary_dir)?;
    let rows = outcome.summary_rows();
    let summary = SummaryArtifact {
        config_hash: &outcome.config_hash,
        rows: &rows,
        failures: &outcome.failures,
    };
    write_json(&summary_dir.join("table3.json"), &summary, true)?;
    fs::write(summary_dir.join("table3.txt"), render_summary_text(&rows, &outcome.config_hash))?;
    Ok(())
}

/// Aligned-column text form of the summary table, accuracies to one
/// decimal place.
pub fn render_summary_text(rows: &[SummaryRow], config_hash: &str) -> String {
    use std::fmt::Write;
    let mut out = format!("average accuracy by activity group (config {config_hash})\n\n");
    let _ = writeln!(
        out,
        "{:<12}{:>12}{:>14}{:>12}{:>10}{:>14}",
        "group", "participant", "accel-only", "gyro-only", "joint", "improvement%"
    );
    let cell = |v: Option<f64>| match v {
        Some(x) => format!("{x:.1}"),
        None => "-".to_string(),
    };
    for row in rows {
        let _ = writeln!(
            out,
            "{:<12}{:>12}{:>14}{:>12}{:>10}{:>14}",
            row.group.as_str(),
            row.participant,
            cell(row.accel_only),
            cell(row.gyro_only),
            cell(row.joint),
            cell(row.improvement_pct),
        );
    }
    out
}

fn write_json<T: Serialize>(path: &Path, value: &T, pretty: bool) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::file(path, e))?;
    let mut writer = std::io::BufWriter::new(file);
    if pretty {
        serde_json::to_writer_pretty(&mut writer, value)?;
    } else {
        serde_json::to_writer(&mut writer, value)?;
    }
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Read a timeline artifact back from disk.
pub fn read_timeline_artifact(path: &Path) -> Result<TimelineArtifact> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
