use std::collections::BTreeMap;

use serde::Serialize;

use crate::data::{ResultsTable, SuccessLog};
use crate::stats::{mean, skewness};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RsedCell {
    pub dataset: String,
    pub method: String,
    pub rsed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RsedReport {
    pub cells: Vec<RsedCell>,
    /// Mean over datasets of each method's cells.
    pub method_rsed: BTreeMap<String, f64>,
    /// Mean over methods of each dataset's cells.
    pub ds_rsed: BTreeMap<String, f64>,
    /// Per-method cell values, ordered by dataset, for box plots.
    pub method_distributions: BTreeMap<String, Vec<f64>>,
    /// Cells with nothing attempted.
    pub excluded: Vec<String>,
}

/// Ratio of successful experiments per cell and its two marginal means.
pub fn rsed(log: &SuccessLog) -> Result<RsedReport> {
    if log.rows().is_empty() {
        return Err(Error::Contract("success log is empty".into()));
    }
    let mut cells = vec![];
    let mut excluded = vec![];
    for r in log.rows() {
        if r.attempted == 0 {
            excluded.push(format!("{}/{}", r.dataset, r.method));
            continue;
        }
        cells.push(RsedCell {
            dataset: r.dataset.clone(),
            method: r.method.clone(),
            rsed: r.finished as f64 / r.attempted as f64,
        });
    }
    cells.sort_by(|a, b| (&a.dataset, &a.method).cmp(&(&b.dataset, &b.method)));
    let mut by_method: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut by_dataset: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for c in &cells {
        by_method.entry(c.method.clone()).or_default().push(c.rsed);
        by_dataset.entry(c.dataset.clone()).or_default().push(c.rsed);
    }
    Ok(RsedReport {
        method_rsed: by_method.iter().map(|(k, v)| (k.clone(), mean(v))).collect(),
        ds_rsed: by_dataset.iter().map(|(k, v)| (k.clone(), mean(v))).collect(),
        method_distributions: by_method,
        cells,
        excluded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImprovementFlag {
    /// Default loss already 0.
    NothingToImprove,
    /// Tuning made things worse; clamped to 0.
    NegativeClamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Improvement {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<ImprovementFlag>,
}

/// (default − tuned) / default for losses in [0,1].
pub fn relative_improvement(default_loss: f64, tuned_loss: f64) -> Result<Improvement> {
    for v in [default_loss, tuned_loss] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Contract(format!("loss {v} outside [0,1]")));
        }
    }
    if default_loss == 0.0 {
        return Ok(Improvement {
            value: 0.0,
            flag: Some(ImprovementFlag::NothingToImprove),
        });
    }
    let v = (default_loss - tuned_loss) / default_loss;
    Ok(if v < 0.0 {
        Improvement {
            value: 0.0,
            flag: Some(ImprovementFlag::NegativeClamped),
        }
    } else {
        Improvement { value: v, flag: None }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodHistogram {
    pub counts: Vec<usize>,
    pub n: usize,
    pub skewness: f64,
    pub clamped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramReport {
    pub default_measure: String,
    pub tuned_measure: String,
    /// Bin edges on [0,1]; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub methods: BTreeMap<String, MethodHistogram>,
    /// Methods with default scores but no usable (default, tuned) pair.
    pub omitted: Vec<String>,
    /// Cells with a default score but no tuned score.
    pub excluded: Vec<String>,
}

/// Bin of `v` in `bins` equal-width bins over [0,1], last bin right-closed.
pub fn bin_index(v: f64, bins: usize) -> usize {
    ((v * bins as f64).floor() as usize).min(bins - 1)
}

/// Per-method histograms of the relative improvement from the score under
/// `default_measure` to the score under `tuned_measure`, for every method
/// with default-parameter scores.
pub fn improvement_histograms(
    results: &ResultsTable,
    default_measure: &str,
    tuned_measure: &str,
    bins: usize,
) -> Result<HistogramReport> {
    if bins == 0 {
        return Err(Error::Contract("need at least one bin".into()));
    }
    let mut methods = BTreeMap::new();
    let mut omitted = vec![];
    let mut excluded = vec![];
    for m in results.methods_for(default_measure) {
        let mut values = vec![];
        let mut clamped = 0;
        for d in results.datasets() {
            match (results.score(d, m, default_measure), results.score(d, m, tuned_measure)) {
                (Some(a), Some(b)) => {
                    let imp = relative_improvement(a, b)?;
                    if imp.flag == Some(ImprovementFlag::NegativeClamped) {
                        clamped += 1;
                    }
                    values.push(imp.value);
                }
                (None, _) => {}
                _ => excluded.push(format!("{d}/{m}")),
            }
        }
        if values.is_empty() {
            omitted.push(m.to_string());
            continue;
        }
        let mut counts = vec![0; bins];
        for &v in &values {
            counts[bin_index(v, bins)] += 1;
        }
        methods.insert(
            m.to_string(),
            MethodHistogram {
                counts,
                n: values.len(),
                skewness: skewness(&values),
                clamped,
            },
        );
    }
    Ok(HistogramReport {
        default_measure: default_measure.to_string(),
        tuned_measure: tuned_measure.to_string(),
        edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
        methods,
        omitted,
        excluded,
    })
}
