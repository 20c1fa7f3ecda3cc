//! Column-normalized confusion matrices, per-activity and group
//! accuracies, and percent improvement between methods.
//!
//! Ground-truth labels sit on columns and predicted labels on rows; each
//! column with samples is normalized to percentages summing to 100. The
//! out-of-dictionary truth column appears in matrices but is excluded from
//! every group average. Unannotated instants are excluded from counting
//! and reported.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ActivityLabel, ClassifiedTimeline};

const PREDICTED: [ActivityLabel; 7] = ActivityLabel::DICTIONARY;
const TRUTH: [ActivityLabel; 8] = ActivityLabel::ALL;

/// Activity groupings used for summary accuracy tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ActivityGroup {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "vigorous")]
    Vigorous,
    #[serde(rename = "stationary")]
    Stationary,
    #[serde(rename = "transition")]
    Transition,
}

impl ActivityGroup {
    pub const ALL_GROUPS: [ActivityGroup; 4] = [
        ActivityGroup::All,
        ActivityGroup::Vigorous,
        ActivityGroup::Stationary,
        ActivityGroup::Transition,
    ];

    /// Member activities. The out-of-dictionary label belongs to no group.
    pub fn members(self) -> &'static [ActivityLabel] {
        match self {
            ActivityGroup::All => &ActivityLabel::DICTIONARY,
            ActivityGroup::Vigorous => &[
                ActivityLabel::Walk,
                ActivityLabel::StairUp,
                ActivityLabel::StairDown,
            ],
            ActivityGroup::Stationary => &[ActivityLabel::Sit, ActivityLabel::Stand],
            ActivityGroup::Transition => &[ActivityLabel::SitToStand, ActivityLabel::StandToSit],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ActivityGroup::All => "all",
            ActivityGroup::Vigorous => "vigorous",
            ActivityGroup::Stationary => "stationary",
            ActivityGroup::Transition => "transition",
        }
    }
}

impl std::fmt::Display for ActivityGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counts of (truth, predicted) pairs with truth on columns and predicted
/// on rows. Percentages are derived from the retained raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    /// counts[row][col] = samples with truth `TRUTH[col]` predicted as
    /// `PREDICTED[row]`.
    counts: Vec<Vec<u64>>,
    excluded_unlabeled: u64,
}

impl ConfusionMatrix {
    fn empty() -> Self {
        ConfusionMatrix {
            counts: vec![vec![0; TRUTH.len()]; PREDICTED.len()],
            excluded_unlabeled: 0,
        }
    }

    /// Tally one timeline. Points without ground truth are excluded and
    /// counted in [`ConfusionMatrix::excluded_unlabeled`].
    pub fn from_timeline(timeline: &ClassifiedTimeline) -> Result<Self> {
        Self::from_timelines(std::slice::from_ref(timeline))
    }

    /// Tally several timelines (e.g. all steps of one participant) into a
    /// single matrix.
    pub fn from_timelines(timelines: &[ClassifiedTimeline]) -> Result<Self> {
        let mut cm = ConfusionMatrix::empty();
        for timeline in timelines {
            for point in timeline.points() {
                match point.truth {
                    Some(truth) => {
                        cm.counts[point.predicted.ordinal()][truth.ordinal()] += 1;
                    }
                    None => cm.excluded_unlabeled += 1,
                }
            }
        }
        if cm.total() == 0 {
            return Err(Error::EmptyTimeline);
        }
        Ok(cm)
    }

    pub fn truth_labels(&self) -> &'static [ActivityLabel] {
        &TRUTH
    }

    pub fn predicted_labels(&self) -> &'static [ActivityLabel] {
        &PREDICTED
    }

    pub fn count(&self, predicted: ActivityLabel, truth: ActivityLabel) -> u64 {
        self.counts[predicted.ordinal()][truth.ordinal()]
    }

    /// Samples whose ground truth is `truth`.
    pub fn column_total(&self, truth: ActivityLabel) -> u64 {
        self.counts.iter().map(|row| row[truth.ordinal()]).sum()
    }

    /// All counted samples.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Annotated-but-unlabeled points that were excluded from counting.
    pub fn excluded_unlabeled(&self) -> u64 {
        self.excluded_unlabeled
    }

    /// Column-normalized percentage, or `None` if the truth column has no
    /// samples.
    pub fn percentage(&self, predicted: ActivityLabel, truth: ActivityLabel) -> Option<f64> {
        let total = self.column_total(truth);
        (total > 0).then(|| 100.0 * self.count(predicted, truth) as f64 / total as f64)
    }

    /// Diagonal percentage (accuracy) for a dictionary activity.
    pub fn diagonal(&self, label: ActivityLabel) -> Option<f64> {
        label.is_dictionary().then(|| self.percentage(label, label)).flatten()
    }

    /// Full percentage grid in row-major order, `None` for empty columns.
    pub fn percentages(&self) -> Vec<Vec<Option<f64>>> {
        PREDICTED
            .iter()
            .map(|&p| TRUTH.iter().map(|&t| self.percentage(p, t)).collect())
            .collect()
    }

    /// Aligned-column text rendering: percentages to one decimal place,
    /// with a footer row of per-column sample counts.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let width = 14;
        let mut out = String::new();
        let _ = write!(out, "{:>width$}", "predicted\\truth");
        for t in TRUTH {
            let _ = write!(out, "{:>width$}", t.as_str());
        }
        out.push('\n');
        for p in PREDICTED {
            let _ = write!(out, "{:>width$}", p.as_str());
            for t in TRUTH {
                match self.percentage(p, t) {
                    Some(pct) => {
                        let _ = write!(out, "{:>width$.1}", pct);
                    }
                    None => {
                        let _ = write!(out, "{:>width$}", "-");
                    }
                }
            }
            out.push('\n');
        }
        let _ = write!(out, "{:>width$}", "samples");
        for t in TRUTH {
            let _ = write!(out, "{:>width$}", self.column_total(t));
        }
        out.push('\n');
        if self.excluded_unlabeled > 0 {
            let _ = write!(out, "(excluded {} unannotated samples)\n", self.excluded_unlabeled);
        }
        out
    }
}

/// Build the confusion matrix for a classified timeline.
pub fn confusion_matrix(timeline: &ClassifiedTimeline) -> Result<ConfusionMatrix> {
    ConfusionMatrix::from_timeline(timeline)
}

/// Unweighted mean of the diagonal percentages over a group's members.
/// Every member must appear as a populated truth column.
pub fn group_average_accuracy(cm: &ConfusionMatrix, group: ActivityGroup) -> Result<f64> {
    let mut sum = 0.0;
    for &label in group.members() {
        sum += cm
            .diagonal(label)
            .ok_or(Error::MissingActivity { label })?;
    }
    Ok(sum / group.members().len() as f64)
}

/// Percent increase of the joint-sensor accuracy relative to the better
/// single sensor: `100 * (joint - max(accel, gyro)) / max(accel, gyro)`.
/// Negative when the joint method is worse.
pub fn percent_improvement(joint: f64, accel: f64, gyro: f64) -> Result<f64> {
    let baseline = accel.max(gyro);
    if baseline == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * (joint - baseline) / baseline)
}

/// Serializable view of a confusion matrix for JSON artifacts: raw counts
/// plus derived column percentages.
#[derive(Debug, Clone, Serialize)]
pub struct ConfusionMatrixView {
    pub truth_labels: Vec<ActivityLabel>,
    pub predicted_labels: Vec<ActivityLabel>,
    /// counts[row][col], rows = predicted, cols = truth.
    pub counts: Vec<Vec<u64>>,
    /// Column-normalized percentages; `null` where a column has no samples.
    pub percentages: Vec<Vec<Option<f64>>>,
    pub column_totals: Vec<u64>,
    pub excluded_unlabeled: u64,
}

impl From<&ConfusionMatrix> for ConfusionMatrixView {
    fn from(cm: &ConfusionMatrix) -> Self {
        ConfusionMatrixView {
            truth_labels: TRUTH.to_vec(),
            predicted_labels: PREDICTED.to_vec(),
            counts: cm.counts.clone(),
            percentages: cm.percentages(),
            column_totals: TRUTH.iter().map(|&t| cm.column_total(t)).collect(),
            excluded_unlabeled: cm.excluded_unlabeled,
        }
    }
}
