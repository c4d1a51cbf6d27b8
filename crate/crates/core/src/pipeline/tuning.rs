use std::collections::BTreeMap;

use ndarray::Array2;
use serde::Serialize;

use super::loo::{loo_evaluate, LooReport};
use super::meta::{assemble, method_groups, tune_outcome, MetaDataset, MetaMatrix, TargetKind, HYPER_TUNED};
use crate::data::{Registry, ResultsTable};
use crate::eval::{auroc, AurocMode};
use crate::pct::{learn, LearnParams, Mode, Tree};
use crate::stats::quantile;
use crate::Result;

/// Average precision: precision at each distinct score (descending),
/// weighted by the recall gained there. `None` without positives.
pub fn average_precision(truth: &[bool], scores: &[f64]) -> Option<f64> {
    let pos = truth.iter().filter(|t| **t).count();
    if pos == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..truth.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let (mut tp, mut seen, mut ap) = (0usize, 0usize, 0.0);
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        let mut gained = 0;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            gained += truth[order[j]] as usize;
            j += 1;
        }
        seen += j - i;
        tp += gained;
        ap += gained as f64 / pos as f64 * (tp as f64 / seen as f64);
        i = j;
    }
    Some(ap)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneReport {
    pub dataset: MetaDataset,
    /// Tree learned on all rows with the chosen F-test level.
    pub tree: Tree,
    pub loo: LooReport,
    pub accuracy: f64,
    /// Computed from held-out leaf proportions of the hyper-tuned class;
    /// `None` when the labels hold one class only.
    pub auroc: Option<f64>,
    pub auprc: Option<f64>,
}

/// Learns whether tuning beats the reliable defaults from meta features.
pub fn tune_or_not(
    meta: &MetaMatrix,
    results: &ResultsTable,
    registry: &Registry,
    measure: &str,
    f_grid: &[f64],
    min_leaf: usize,
    allow_missing: bool,
) -> Result<TuneReport> {
    let md = assemble(meta, results, registry, measure, &[], TargetKind::Tune, allow_missing)?;
    let loo = loo_evaluate(&md, f_grid, min_leaf)?;
    let rows: Vec<usize> = (0..md.n_rows()).collect();
    let tree = learn(
        &md.table(&rows)?,
        Mode::Classification,
        LearnParams {
            f_level: loo.chosen_f_level,
            min_leaf,
        },
    )?;
    let labels = md.labels().expect("tune targets are labels");
    let truth: Vec<bool> = labels.iter().map(|l| l == HYPER_TUNED).collect();
    let scores: Vec<f64> = loo
        .held_out
        .iter()
        .map(|h| h.proportions.get(HYPER_TUNED).copied().unwrap_or(0.0))
        .collect();
    let t = Array2::from_shape_fn((truth.len(), 1), |(i, _)| truth[i]);
    let s = Array2::from_shape_fn((scores.len(), 1), |(i, _)| scores[i]);
    let auroc = auroc(&t, &s, AurocMode::Micro).ok();
    let auprc = average_precision(&truth, &scores);
    Ok(TuneReport {
        accuracy: loo.chosen().score.accuracy.expect("classification accuracy"),
        dataset: md,
        tree,
        loo,
        auroc,
        auprc,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Quartiles {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureDifferences {
    /// dataset -> best hyper-tuned minus best reliable-defaults score,
    /// signed so that positive means tuning is better.
    pub differences: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartiles: Option<Quartiles>,
    pub excluded: Vec<String>,
}

pub fn difference_boxplot_data(
    results: &ResultsTable,
    registry: &Registry,
    measures: &[String],
) -> Result<BTreeMap<String, MeasureDifferences>> {
    let mut out = BTreeMap::new();
    for m in measures {
        let o = registry.orientation(m)?;
        let groups = method_groups(results, registry, m)?;
        let mut differences = BTreeMap::new();
        let mut excluded = vec![];
        for d in results.datasets() {
            match tune_outcome(results, d, m, &groups, o) {
                Some((_, diff)) => {
                    differences.insert(d.to_string(), diff);
                }
                None => excluded.push(d.to_string()),
            }
        }
        let values: Vec<f64> = differences.values().copied().collect();
        out.insert(
            m.clone(),
            MeasureDifferences {
                quartiles: Quartiles::of(&values),
                differences,
                excluded,
            },
        );
    }
    Ok(out)
}
