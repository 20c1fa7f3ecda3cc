use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use movelet_har::classify::Mode;
use movelet_har::evaluate::{
    group_average_accuracy, ActivityGroup, ConfusionMatrix, ConfusionMatrixView,
};
use movelet_har::model::ClassifiedTimeline;
use movelet_har::pipeline::{
    self, build_dictionary, read_dictionary_artifact, read_timeline_artifact, run_experiment,
    write_json_artifact, write_outcome, DictionaryArtifact, ExperimentConfig, TimelineArtifact,
};

use crate::{ConfigArgs, ExportFormat, DATASET_ROOT_ENV};

/// Load the config file (or defaults) and fold in CLI and environment
/// overrides.
fn resolve_config(args: &ConfigArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_toml_path(path)
            .with_context(|| format!("reading config {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Ok(root) = std::env::var(DATASET_ROOT_ENV) {
        config.dataset_root = PathBuf::from(root);
    }
    if let Some(root) = &args.dataset_root {
        config.dataset_root = root.clone();
    }
    if let Some(out) = &args.out {
        config.output_root = out.clone();
    }
    if !args.participants.is_empty() {
        config.participants = args.participants.clone();
    }
    if !args.modes.is_empty() {
        config.modes = args.modes.clone();
    }
    if !args.steps.is_empty() {
        config.steps = args.steps.clone();
    }
    config.validate()?;
    Ok(config)
}

/// Parse every configured dataset file and report one line per file.
pub fn validate(args: &ConfigArgs) -> Result<ExitCode> {
    let config = resolve_config(args)?;
    if !config.dataset_root.is_dir() {
        bail!("dataset not found at {}", config.dataset_root.display());
    }

    let mut failures = 0usize;
    let mut check = |path: &Path, result: std::result::Result<String, movelet_har::Error>| {
        match result {
            Ok(detail) => println!("ok    {} ({detail})", path.display()),
            Err(e) => {
                failures += 1;
                println!("FAIL  {}: {e}", path.display());
            }
        }
    };

    for &participant in &config.participants {
        let mut dirs = vec![config.training_dir(participant)];
        dirs.extend(config.steps.iter().map(|&s| config.step_dir(participant, s)));
        for dir in dirs {
            for (file, kind) in [
                (pipeline::ACCEL_FILE, movelet_har::SensorKind::Accelerometer),
                (pipeline::GYRO_FILE, movelet_har::SensorKind::Gyroscope),
            ] {
                let path = dir.join(file);
                let result = movelet_har::ingest::parse_sensor_csv(
                    &path,
                    kind,
                    &config.columns,
                    config.sample_rate_hz,
                )
                .map(|series| format!("{} samples", series.len()));
                check(&path, result);
            }
            let path = dir.join(pipeline::LABELS_FILE);
            let result = movelet_har::ingest::parse_label_csv(&path).and_then(|intervals| {
                movelet_har::ingest::validate_intervals(&intervals)?;
                Ok(format!("{} intervals", intervals.len()))
            });
            check(&path, result);
        }
    }

    if failures > 0 {
        eprintln!("{failures} file(s) failed validation");
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

pub fn build_dict(args: &ConfigArgs, participant: u32, mode: Mode, out: &Path) -> Result<ExitCode> {
    let config = resolve_config(args)?;
    let training = pipeline::load_training(&config, participant, mode)?;
    let dictionary = build_dictionary(
        &training,
        &participant.to_string(),
        mode,
        config.window_samples,
        config.training_cap_seconds,
    )?;
    let artifact = DictionaryArtifact {
        config_hash: config.hash(),
        participant,
        mode,
        dictionary,
    };
    write_json_artifact(out, &artifact, false)?;
    println!(
        "wrote {} ({} movelets, {} channels)",
        out.display(),
        artifact.dictionary.total_movelets(),
        artifact.dictionary.channels()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn classify(args: &ConfigArgs, dict_path: &Path, out: &Path) -> Result<ExitCode> {
    let config = resolve_config(args)?;
    let artifact = read_dictionary_artifact(dict_path)
        .with_context(|| format!("reading dictionary {}", dict_path.display()))?;
    let (participant, mode) = (artifact.participant, artifact.mode);

    std::fs::create_dir_all(out)?;
    for &step in &config.steps {
        let recording = pipeline::load_step(&config, participant, step, mode)?;
        let result = pipeline::classify_step(&config, &recording, &artifact.dictionary, mode, step)?;
        let timeline = TimelineArtifact {
            config_hash: config.hash(),
            participant,
            mode,
            step: step.value(),
            clipped_head: result.clipped_head,
            clipped_tail: result.clipped_tail,
            timeline: result.timeline,
        };
        let path = out.join(format!("step{}.timeline.json", step.value()));
        write_json_artifact(&path, &timeline, false)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct EvaluationReport {
    config_hash: String,
    sources: Vec<String>,
    matrix: ConfusionMatrixView,
    group_accuracies: Vec<GroupCell>,
}

#[derive(serde::Serialize)]
struct GroupCell {
    group: ActivityGroup,
    accuracy: Option<f64>,
}

pub fn evaluate(timeline_paths: &[PathBuf], out: Option<&Path>) -> Result<ExitCode> {
    let mut timelines: Vec<ClassifiedTimeline> = Vec::new();
    let mut hashes: Vec<String> = Vec::new();
    for path in timeline_paths {
        let artifact = read_timeline_artifact(path)
            .with_context(|| format!("reading timeline {}", path.display()))?;
        if !hashes.contains(&artifact.config_hash) {
            hashes.push(artifact.config_hash.clone());
        }
        timelines.push(artifact.timeline);
    }
    if hashes.len() > 1 {
        bail!("timeline artifacts come from different configs: {hashes:?}");
    }

    let matrix = ConfusionMatrix::from_timelines(&timelines)?;
    print!("{}", matrix.render_text());
    println!();
    for group in ActivityGroup::ALL_GROUPS {
        match group_average_accuracy(&matrix, group) {
            Ok(acc) => println!("{:<12}{acc:>8.1}", group.as_str()),
            Err(_) => println!("{:<12}{:>8}", group.as_str(), "-"),
        }
    }

    if let Some(path) = out {
        let report = EvaluationReport {
            config_hash: hashes.pop().unwrap_or_default(),
            sources: timeline_paths.iter().map(|p| p.display().to_string()).collect(),
            matrix: ConfusionMatrixView::from(&matrix),
            group_accuracies: ActivityGroup::ALL_GROUPS
                .into_iter()
                .map(|group| GroupCell {
                    group,
                    accuracy: group_average_accuracy(&matrix, group).ok(),
                })
                .collect(),
        };
        write_json_artifact(path, &report, true)?;
        println!("\nwrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

pub fn run(args: &ConfigArgs) -> Result<ExitCode> {
    let config = resolve_config(args)?;
    let outcome = run_experiment(&config)?;
    write_outcome(&outcome, &config.output_root)?;

    println!(
        "config {}: {} participant/mode result(s) under {}",
        outcome.config_hash,
        outcome.artifacts.len(),
        config.output_root.display()
    );
    print!("{}", pipeline::render_summary_text(&outcome.summary_rows(), &outcome.config_hash));

    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for failure in &outcome.failures {
            eprintln!(
                "FAIL participant {} {}: {}",
                failure.participant, failure.mode, failure.message
            );
        }
        Ok(ExitCode::FAILURE)
    }
}

pub fn export_timeline(artifact: &Path, format: ExportFormat, out: Option<&Path>) -> Result<ExitCode> {
    if !artifact.is_file() {
        bail!("artifact missing: {}", artifact.display());
    }
    let timeline = read_timeline_artifact(artifact)
        .with_context(|| format!("reading timeline {}", artifact.display()))?;

    let rendered = match format {
        ExportFormat::Tsv => {
            let mut text = String::from("elapsed_seconds\ttruth\tpredicted\n");
            for point in timeline.timeline.points() {
                let truth = point.truth.map(|l| l.as_str()).unwrap_or("-");
                text.push_str(&format!("{:.3}\t{}\t{}\n", point.t, truth, point.predicted));
            }
            text
        }
        ExportFormat::Json => {
            let mut text = serde_json::to_string(&timeline)?;
            text.push('\n');
            text
        }
    };

    match out {
        Some(path) => std::fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}
