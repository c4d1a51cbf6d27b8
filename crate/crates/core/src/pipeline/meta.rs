use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::data::{read_raw_columns, Column, Orientation, Registry, ResultsTable};
use crate::features::MetaFeatureVector;
use crate::pct::{DataTable, Targets};
use crate::{Error, Result};

pub const HYPER_TUNED: &str = "hyper-tuned";
pub const RELIABLE_DEFAULTS: &str = "reliable-defaults";

/// Meta-feature values of several datasets, rows keyed by dataset name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaMatrix {
    pub datasets: Vec<String>,
    pub features: Vec<String>,
    /// Row-major values, one row per dataset.
    pub values: Vec<Vec<f64>>,
}

impl MetaMatrix {
    pub fn new(datasets: Vec<String>, features: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for d in &datasets {
            if !seen.insert(d) {
                return Err(Error::Schema(format!("dataset '{d}' appears twice in the meta matrix")));
            }
        }
        if features.is_empty() {
            return Err(Error::Schema("meta matrix has no feature columns".into()));
        }
        if values.len() != datasets.len() || values.iter().any(|r| r.len() != features.len()) {
            return Err(Error::Schema("meta matrix shape mismatch".into()));
        }
        for (d, row) in datasets.iter().zip(&values) {
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Schema(format!(
                    "meta feature '{}' of '{d}' is not finite",
                    features[j]
                )));
            }
        }
        Ok(MetaMatrix {
            datasets,
            features,
            values,
        })
    }

    pub fn from_vectors(vectors: &[MetaFeatureVector]) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::Schema("no meta-feature vectors".into()))?;
        let features: Vec<String> = first.features.iter().map(|f| f.id.clone()).collect();
        let values = vectors
            .iter()
            .map(|v| {
                if v.features.iter().map(|f| &f.id).ne(features.iter()) {
                    return Err(Error::Schema(format!("'{}' has a different feature layout", v.dataset)));
                }
                Ok(v.features.iter().map(|f| f.value).collect())
            })
            .collect::<Result<_>>()?;
        Self::new(vectors.iter().map(|v| v.dataset.clone()).collect(), features, values)
    }

    /// Parses the CSV written by [`crate::features::matrix_to_csv`]: a
    /// `dataset` column followed by one column per feature.
    pub fn parse(text: &str) -> Result<Self> {
        let (header, raw) = read_raw_columns(text)?;
        if header.first().map(String::as_str) != Some("dataset") {
            return Err(Error::Schema("meta matrix must start with a 'dataset' column".into()));
        }
        let n = raw[0].len();
        let mut values = vec![Vec::with_capacity(header.len() - 1); n];
        for (name, col) in header.iter().zip(&raw).skip(1) {
            for (i, v) in col.iter().enumerate() {
                let x: f64 = v.parse().map_err(|_| {
                    Error::Schema(format!(
                        "meta feature '{name}' of '{}' is not a number: '{v}'",
                        raw[0][i]
                    ))
                })?;
                values[i].push(x);
            }
        }
        Self::new(raw[0].clone(), header[1..].to_vec(), values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn row(&self, dataset: &str) -> Option<&[f64]> {
        self.datasets
            .iter()
            .position(|d| d == dataset)
            .map(|i| self.values[i].as_slice())
    }

    /// Clustering-mode tree table over all datasets.
    pub fn to_table(&self) -> Result<DataTable> {
        DataTable::new(
            self.datasets.clone(),
            descriptor_columns(&self.features, &self.values),
            Targets::None,
        )
    }
}

fn descriptor_columns(names: &[String], rows: &[Vec<f64>]) -> Vec<Column> {
    names
        .iter()
        .enumerate()
        .map(|(j, n)| Column::numeric(n.clone(), rows.iter().map(|r| Some(r[j])).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// Scores of each selected method (multi-target regression).
    Scores,
    /// Name of the best method (classification).
    Best,
    /// Whether tuning pays off (binary classification).
    Tune,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MetaTarget {
    Scores {
        methods: Vec<String>,
        values: Vec<Vec<f64>>,
    },
    Best {
        labels: Vec<String>,
        tied: Vec<bool>,
    },
    Tune {
        labels: Vec<String>,
    },
}

/// Meta-learning table: descriptors of each dataset and one target spec.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaDataset {
    pub measure: String,
    pub datasets: Vec<String>,
    pub features: Vec<String>,
    pub descriptors: Vec<Vec<f64>>,
    pub target: MetaTarget,
    /// Datasets left out for missing scores (only with `allow_missing`).
    pub dropped: Vec<String>,
}

impl MetaDataset {
    pub fn n_rows(&self) -> usize {
        self.datasets.len()
    }

    pub fn is_classification(&self) -> bool {
        !matches!(self.target, MetaTarget::Scores { .. })
    }

    /// Class labels (classification targets) or `None`.
    pub fn labels(&self) -> Option<&[String]> {
        match &self.target {
            MetaTarget::Best { labels, .. } | MetaTarget::Tune { labels } => Some(labels),
            MetaTarget::Scores { .. } => None,
        }
    }

    /// Tree table over the given rows.
    pub fn table(&self, rows: &[usize]) -> Result<DataTable> {
        let pick = |xs: &[Vec<f64>]| rows.iter().map(|&i| xs[i].clone()).collect::<Vec<_>>();
        let desc = descriptor_columns(&self.features, &pick(&self.descriptors));
        let ids = rows.iter().map(|&i| self.datasets[i].clone()).collect();
        let targets = match &self.target {
            MetaTarget::Scores { methods, values } => Targets::Numeric {
                names: methods.clone(),
                values: pick(values),
            },
            MetaTarget::Best { labels, .. } | MetaTarget::Tune { labels } => {
                let classes: Vec<String> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
                let codes = rows
                    .iter()
                    .map(|&i| classes.binary_search(&labels[i]).expect("known class"))
                    .collect();
                Targets::Class {
                    name: "target".into(),
                    classes,
                    codes,
                }
            }
        };
        DataTable::new(ids, desc, targets)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["dataset".to_string()];
        header.extend(self.features.iter().cloned());
        match &self.target {
            MetaTarget::Scores { methods, .. } => header.extend(methods.iter().map(|m| format!("score:{m}"))),
            MetaTarget::Best { .. } => header.extend(["best".to_string(), "tied".to_string()]),
            MetaTarget::Tune { .. } => header.push("tune".to_string()),
        }
        w.write_record(&header)?;
        for i in 0..self.n_rows() {
            let mut rec = vec![self.datasets[i].clone()];
            rec.extend(self.descriptors[i].iter().map(|v| v.to_string()));
            match &self.target {
                MetaTarget::Scores { values, .. } => rec.extend(values[i].iter().map(|v| v.to_string())),
                MetaTarget::Best { labels, tied } => rec.extend([labels[i].clone(), tied[i].to_string()]),
                MetaTarget::Tune { labels } => rec.push(labels[i].clone()),
            }
            w.write_record(&rec)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Schema(e.to_string()))?).expect("utf-8 csv"))
    }
}

/// Best method of one dataset: the first in name order among those with
/// the best score. Returns (method, tied).
pub fn argbest<'a>(
    scored: impl IntoIterator<Item = (&'a str, f64)>,
    orientation: Orientation,
) -> Option<(&'a str, bool)> {
    let mut sorted: Vec<(&str, f64)> = scored.into_iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(b.0));
    let mut best: Option<(&str, f64)> = None;
    let mut tied = false;
    for (m, s) in sorted {
        match best {
            None => best = Some((m, s)),
            Some((_, b)) if orientation.better(s, b) => {
                best = Some((m, s));
                tied = false;
            }
            Some((_, b)) if s == b => tied = true,
            _ => {}
        }
    }
    best.map(|(m, _)| (m, tied))
}

/// Best score among `methods` that have one for this dataset.
fn group_best(results: &ResultsTable, dataset: &str, measure: &str, methods: &[&str], o: Orientation) -> Option<f64> {
    methods
        .iter()
        .filter_map(|m| results.score(dataset, m, measure))
        .reduce(|a, b| if o.better(b, a) { b } else { a })
}

/// Splits the methods scored for `measure` into (reliable defaults,
/// hyper-tuned) by the registry; errors if either group is empty.
pub fn method_groups<'a>(
    results: &'a ResultsTable,
    registry: &Registry,
    measure: &str,
) -> Result<(Vec<&'a str>, Vec<&'a str>)> {
    let (defaults, tuned): (Vec<&str>, Vec<&str>) = results
        .methods_for(measure)
        .into_iter()
        .partition(|m| registry.is_reliable_default(m));
    if defaults.is_empty() {
        return Err(Error::Contract(format!(
            "group '{RELIABLE_DEFAULTS}' has no scores for '{measure}'"
        )));
    }
    if tuned.is_empty() {
        return Err(Error::Contract(format!(
            "group '{HYPER_TUNED}' has no scores for '{measure}'"
        )));
    }
    Ok((defaults, tuned))
}

/// Tune label and the orientation-adjusted difference (positive when
/// tuning is better) of one dataset.
pub(crate) fn tune_outcome(
    results: &ResultsTable,
    dataset: &str,
    measure: &str,
    groups: &(Vec<&str>, Vec<&str>),
    o: Orientation,
) -> Option<(&'static str, f64)> {
    let d = group_best(results, dataset, measure, &groups.0, o)?;
    let t = group_best(results, dataset, measure, &groups.1, o)?;
    let label = if o.better(t, d) { HYPER_TUNED } else { RELIABLE_DEFAULTS };
    Some((label, o.sign() * (t - d)))
}

/// Builds the meta-learning table for one measure. Scores and best-method
/// targets need every (dataset, method) cell; tune targets need at least
/// one score in each group. Without `allow_missing` any gap is an error
/// listing every missing cell; with it, incomplete datasets are dropped.
pub fn assemble(
    meta: &MetaMatrix,
    results: &ResultsTable,
    registry: &Registry,
    measure: &str,
    methods: &[String],
    kind: TargetKind,
    allow_missing: bool,
) -> Result<MetaDataset> {
    let o = registry.orientation(measure)?;
    let methods: Vec<&str> = if methods.is_empty() {
        results.methods_for(measure).into_iter().collect()
    } else {
        methods.iter().map(String::as_str).collect()
    };
    if methods.is_empty() {
        return Err(Error::Contract(format!("no methods scored for '{measure}'")));
    }
    let groups = match kind {
        TargetKind::Tune => Some(method_groups(results, registry, measure)?),
        _ => None,
    };

    let mut missing = vec![];
    let mut keep = vec![];
    let mut dropped = vec![];
    for (i, d) in meta.datasets.iter().enumerate() {
        let gaps: Vec<String> = match &groups {
            Some(g) => [(RELIABLE_DEFAULTS, &g.0), (HYPER_TUNED, &g.1)]
                .into_iter()
                .filter(|(_, ms)| ms.iter().all(|m| results.score(d, m, measure).is_none()))
                .map(|(name, _)| format!("{d}: no '{measure}' score in group '{name}'"))
                .collect(),
            None => methods
                .iter()
                .filter(|m| results.score(d, m, measure).is_none())
                .map(|m| format!("{d}/{m}/{measure}"))
                .collect(),
        };
        if gaps.is_empty() {
            keep.push(i);
        } else {
            dropped.push(d.clone());
            missing.extend(gaps);
        }
    }
    if !missing.is_empty() && !allow_missing {
        return Err(Error::Missing(missing));
    }

    let datasets: Vec<String> = keep.iter().map(|&i| meta.datasets[i].clone()).collect();
    let target = match kind {
        TargetKind::Scores => MetaTarget::Scores {
            methods: methods.iter().map(|m| m.to_string()).collect(),
            values: datasets
                .iter()
                .map(|d| {
                    methods
                        .iter()
                        .map(|m| results.score(d, m, measure).expect("checked"))
                        .collect()
                })
                .collect(),
        },
        TargetKind::Best => {
            let (labels, tied) = datasets
                .iter()
                .map(|d| {
                    let (m, t) = argbest(
                        methods
                            .iter()
                            .map(|m| (*m, results.score(d, m, measure).expect("checked"))),
                        o,
                    )
                    .expect("at least one method");
                    (m.to_string(), t)
                })
                .unzip();
            MetaTarget::Best { labels, tied }
        }
        TargetKind::Tune => {
            let g = groups.as_ref().expect("groups built for tune targets");
            MetaTarget::Tune {
                labels: datasets
                    .iter()
                    .map(|d| tune_outcome(results, d, measure, g, o).expect("checked").0.to_string())
                    .collect(),
            }
        }
    };
    Ok(MetaDataset {
        measure: measure.to_string(),
        datasets,
        features: meta.features.clone(),
        descriptors: keep.iter().map(|&i| meta.values[i].clone()).collect(),
        target,
        dropped,
    })
}

/// Methods ranked best-first for one dataset and measure; equal scores are
/// ordered by method name.
pub fn ranked_methods<'a>(
    results: &'a ResultsTable,
    dataset: &str,
    measure: &str,
    o: Orientation,
) -> Vec<(&'a str, f64)> {
    let mut scored: Vec<(&str, f64)> = results
        .methods_for(measure)
        .into_iter()
        .filter_map(|m| results.score(dataset, m, measure).map(|s| (m, s)))
        .collect();
    scored.sort_by(|a, b| (o.sign() * b.1).total_cmp(&(o.sign() * a.1)).then(a.0.cmp(b.0)));
    scored
}
