//! Bipartition and ranking-quality measures for multi-label predictions,
//! plus PCut thresholding of score matrices.

mod auroc;
mod io;
mod measures;
mod threshold;

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::Serialize;

use crate::{Error, Result};

pub use auroc::{auroc, auroc_detail, AurocMode, AurocResult};
pub use io::{parse_predictions_csv, parse_predictions_json, read_predictions};
pub use measures::{contingency, example_based, label_based};
pub use threshold::{apply_threshold, default_grid, pcut_threshold, predicted_cardinality};

/// Names of the bipartition measures produced by [`example_based`].
pub const EXAMPLE_BASED: [&str; 6] = [
    "hamming_loss",
    "subset_accuracy",
    "accuracy.example-based",
    "precision.example-based",
    "recall.example-based",
    "F1.example-based",
];

/// Names of the bipartition measures produced by [`label_based`].
pub const LABEL_BASED: [&str; 6] = [
    "precision.micro",
    "recall.micro",
    "F1.micro",
    "precision.macro",
    "recall.macro",
    "F1.macro",
];

pub const SCORE_BASED: [&str; 2] = ["AUROC.micro", "AUROC.macro"];

/// Every measure name [`evaluate_all`] understands.
pub fn measure_names() -> impl Iterator<Item = &'static str> {
    EXAMPLE_BASED.into_iter().chain(LABEL_BASED).chain(SCORE_BASED)
}

/// Ground truth with relevance scores, a bipartition, or both.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    truth: Array2<bool>,
    scores: Option<Array2<f64>>,
    bipartition: Option<Array2<bool>>,
}

impl PredictionSet {
    pub fn new(truth: Array2<bool>, scores: Option<Array2<f64>>, bipartition: Option<Array2<bool>>) -> Result<Self> {
        if scores.is_none() && bipartition.is_none() {
            return Err(Error::Contract("prediction set needs scores or a bipartition".into()));
        }
        if let Some(s) = &scores {
            if s.dim() != truth.dim() {
                return Err(shape_error("scores", s.dim(), truth.dim()));
            }
            if let Some(bad) = s.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::Contract(format!("score {bad} outside [0,1]")));
            }
        }
        if let Some(b) = &bipartition {
            if b.dim() != truth.dim() {
                return Err(shape_error("bipartition", b.dim(), truth.dim()));
            }
        }
        Ok(PredictionSet {
            truth,
            scores,
            bipartition,
        })
    }

    pub fn truth(&self) -> &Array2<bool> {
        &self.truth
    }

    pub fn scores(&self) -> Option<&Array2<f64>> {
        self.scores.as_ref()
    }

    pub fn bipartition(&self) -> Option<&Array2<bool>> {
        self.bipartition.as_ref()
    }
}

pub(crate) fn shape_error(what: &str, got: (usize, usize), want: (usize, usize)) -> Error {
    Error::Contract(format!(
        "{what} shape {}x{} does not match truth {}x{}",
        got.0, got.1, want.0, want.1
    ))
}

/// Per-label contingency counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MeasureReport {
    pub values: BTreeMap<String, f64>,
    /// Per-label counts of the bipartition the measures were computed on.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<Counts>,
    /// PCut threshold, when the bipartition was derived from scores.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MeasureReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    fn merge(&mut self, other: MeasureReport) {
        self.values.extend(other.values);
        if self.counts.is_empty() {
            self.counts = other.counts;
        }
        self.notes.extend(other.notes);
    }
}

/// Computes the requested measures. Bipartition measures on a scores-only
/// set go through PCut on the default grid, which needs the training
/// label cardinality.
pub fn evaluate_all(
    pred: &PredictionSet,
    train_cardinality: Option<f64>,
    measures: &[String],
) -> Result<MeasureReport> {
    let mut report = MeasureReport::default();
    if measures.is_empty() {
        return Ok(report);
    }
    if let Some(m) = measures.iter().find(|m| !measure_names().any(|k| k == m.as_str())) {
        return Err(Error::Contract(format!("unknown measure '{m}'")));
    }
    let wants = |set: &[&str]| measures.iter().any(|m| set.contains(&m.as_str()));
    let needs_bipartition = wants(&EXAMPLE_BASED) || wants(&LABEL_BASED);

    let derived = match (&pred.bipartition, needs_bipartition) {
        (None, true) => {
            let first = measures
                .iter()
                .find(|m| !SCORE_BASED.contains(&m.as_str()))
                .expect("bipartition measure requested");
            let scores = pred.scores.as_ref().expect("scores present without bipartition");
            let card = train_cardinality.ok_or_else(|| {
                Error::Contract(format!(
                    "measure '{first}' needs a bipartition or scores with a training cardinality"
                ))
            })?;
            let t = pcut_threshold(card, scores, &default_grid(scores))?;
            report.threshold = Some(t);
            Some(apply_threshold(scores, t))
        }
        _ => None,
    };
    let bipartition = pred.bipartition.as_ref().or(derived.as_ref());

    let mut all = MeasureReport::default();
    if let Some(b) = bipartition {
        if wants(&EXAMPLE_BASED) {
            all.merge(example_based(&pred.truth, b)?);
        }
        if wants(&LABEL_BASED) {
            all.merge(label_based(&pred.truth, b)?);
        }
    }
    for (name, mode) in [("AUROC.micro", AurocMode::Micro), ("AUROC.macro", AurocMode::Macro)] {
        if !measures.iter().any(|m| m == name) {
            continue;
        }
        let scores = pred
            .scores
            .as_ref()
            .ok_or_else(|| Error::Contract(format!("measure '{name}' needs relevance scores")))?;
        let r = auroc_detail(&pred.truth, scores, mode)?;
        if !r.skipped.is_empty() {
            all.notes
                .push(format!("{name}: skipped single-class labels {:?}", r.skipped));
        }
        all.values.insert(name.to_string(), r.value);
    }

    for m in measures {
        report.values.insert(m.clone(), all.values[m.as_str()]);
    }
    report.counts = all.counts;
    report.notes = all.notes;
    Ok(report)
}
