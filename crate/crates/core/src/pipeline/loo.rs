use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::meta::{MetaDataset, MetaTarget};
use crate::pct::{learn, LearnParams, Mode, NodeStats, Prototype, Tree};
use crate::{Error, Result};

/// Leave-one-dataset-out prediction of one held-out row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeldOut {
    pub dataset: String,
    /// Predicted target vector (regression).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Predicted class and the class proportions of its leaf.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub proportions: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooScore {
    /// Per-target mean absolute error (regression only).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub mae: BTreeMap<String, f64>,
    /// Mean of the per-target MAE, or 1 - accuracy.
    pub mean_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooConfig {
    pub f_level: f64,
    pub score: LooScore,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooReport {
    pub task: Mode,
    pub measure: String,
    pub min_leaf: usize,
    pub n_rows: usize,
    pub configs: Vec<LooConfig>,
    pub baseline: LooScore,
    pub chosen_f_level: f64,
    /// Held-out predictions under the chosen level.
    pub held_out: Vec<HeldOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LooReport {
    pub fn chosen(&self) -> &LooConfig {
        self.configs
            .iter()
            .find(|c| c.f_level == self.chosen_f_level)
            .expect("chosen level is in the grid")
    }
}

pub(crate) fn mode_of(md: &MetaDataset) -> Mode {
    if md.is_classification() {
        Mode::Classification
    } else {
        Mode::Regression
    }
}

pub(crate) fn leaf_prediction(tree: &Tree, leaf: usize, dataset: &str) -> HeldOut {
    let node = &tree.nodes[leaf];
    match (&node.prototype, &node.stats) {
        (Prototype::Class { label }, NodeStats::Counts { counts }) => {
            let n = node.n_rows as f64;
            HeldOut {
                dataset: dataset.to_string(),
                values: None,
                label: Some(label.clone()),
                proportions: tree
                    .classes
                    .iter()
                    .zip(counts)
                    .map(|(c, &k)| (c.clone(), k as f64 / n))
                    .collect(),
            }
        }
        (Prototype::Mean { values }, _) => HeldOut {
            dataset: dataset.to_string(),
            values: Some(values.clone()),
            label: None,
            proportions: BTreeMap::new(),
        },
        _ => unreachable!("prototype and stats agree by construction"),
    }
}

/// Learns on all rows but `held`, then predicts `held`.
fn hold_out(md: &MetaDataset, held: usize, params: LearnParams) -> Result<HeldOut> {
    let train: Vec<usize> = (0..md.n_rows()).filter(|&i| i != held).collect();
    let tree = learn(&md.table(&train)?, mode_of(md), params)?;
    let leaf = tree.predict_all(&md.table(&[held])?)?[0].leaf;
    Ok(leaf_prediction(&tree, leaf, &md.datasets[held]))
}

fn score(md: &MetaDataset, preds: &[HeldOut]) -> LooScore {
    let r = md.n_rows() as f64;
    match &md.target {
        MetaTarget::Scores { methods, values } => {
            let mae: BTreeMap<String, f64> = methods
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let total: f64 = preds
                        .iter()
                        .zip(values)
                        .map(|(p, y)| (p.values.as_ref().expect("regression prediction")[j] - y[j]).abs())
                        .sum();
                    (m.clone(), total / r)
                })
                .collect();
            let mean_error = methods.iter().map(|m| mae[m]).sum::<f64>() / methods.len() as f64;
            LooScore {
                mae,
                mean_error,
                accuracy: None,
            }
        }
        MetaTarget::Best { labels, .. } | MetaTarget::Tune { labels } => {
            let hits = preds
                .iter()
                .zip(labels)
                .filter(|(p, y)| p.label.as_ref() == Some(*y))
                .count();
            let acc = hits as f64 / r;
            LooScore {
                mae: BTreeMap::new(),
                mean_error: 1.0 - acc,
                accuracy: Some(acc),
            }
        }
    }
}

/// Regression baseline: each held-out row predicted by the training means.
/// Classification baseline: share of the majority class in the meta data.
pub fn loo_baseline(md: &MetaDataset) -> LooScore {
    let r = md.n_rows();
    match &md.target {
        MetaTarget::Scores { methods, values } => {
            let mae: BTreeMap<String, f64> = methods
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let total: f64 = (0..r)
                        .map(|held| {
                            let rest: f64 = (0..r).filter(|&i| i != held).map(|i| values[i][j]).sum();
                            (values[held][j] - rest / (r - 1) as f64).abs()
                        })
                        .sum();
                    (m.clone(), total / r as f64)
                })
                .collect();
            let mean_error = methods.iter().map(|m| mae[m]).sum::<f64>() / methods.len() as f64;
            LooScore {
                mae,
                mean_error,
                accuracy: None,
            }
        }
        MetaTarget::Best { labels, .. } | MetaTarget::Tune { labels } => {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for l in labels {
                *counts.entry(l).or_default() += 1;
            }
            let acc = *counts.values().max().expect("non-empty") as f64 / r as f64;
            LooScore {
                mae: BTreeMap::new(),
                mean_error: 1.0 - acc,
                accuracy: Some(acc),
            }
        }
    }
}

/// Leave-one-dataset-out evaluation of trees for every level in `f_grid`.
/// The chosen level has the smallest mean error, the smallest level on ties.
pub fn loo_evaluate(md: &MetaDataset, f_grid: &[f64], min_leaf: usize) -> Result<LooReport> {
    let r = md.n_rows();
    if r < 3 {
        return Err(Error::Contract(format!("leave-one-out needs at least 3 rows, got {r}")));
    }
    let mut grid = f_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::Contract("empty F-test grid".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|g| (0..r).map(move |i| (g, i))).collect();
    let preds: Vec<HeldOut> = jobs
        .par_iter()
        .map(|&(g, i)| {
            hold_out(
                md,
                i,
                LearnParams {
                    f_level: grid[g],
                    min_leaf,
                },
            )
        })
        .collect::<Result<_>>()?;
    let mut configs = vec![];
    let mut per_level: Vec<&[HeldOut]> = vec![];
    for (g, chunk) in preds.chunks(r).enumerate() {
        configs.push(LooConfig {
            f_level: grid[g],
            score: score(md, chunk),
        });
        per_level.push(chunk);
    }
    let mut best = 0;
    for (g, c) in configs.iter().enumerate() {
        if c.score.mean_error < configs[best].score.mean_error {
            best = g;
        }
    }
    let mut notes = vec![];
    let constant = match &md.target {
        MetaTarget::Scores { values, .. } => values.iter().all(|v| v == &values[0]),
        MetaTarget::Best { labels, .. } | MetaTarget::Tune { labels } => labels.iter().all(|l| l == &labels[0]),
    };
    if constant {
        notes.push("target is constant: every model equals the baseline".to_string());
    }
    Ok(LooReport {
        task: mode_of(md),
        measure: md.measure.clone(),
        min_leaf,
        n_rows: r,
        baseline: loo_baseline(md),
        chosen_f_level: grid[best],
        held_out: per_level[best].to_vec(),
        configs,
        notes,
    })
}
