//! Multi-label dataset model, parsers and the tabular inputs of the meta-analysis.

mod arff;
mod csv_io;
pub mod reference;
mod registry;
mod results;
mod summary;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use arff::{parse_arff_str, parse_mulan, parse_mulan_xml, LabelSpec};
pub(crate) use csv_io::{build_column, read_raw_columns};
pub use csv_io::{parse_csv, parse_csv_str, type_hints, write_csv, TypeHint};
pub use registry::{Family, Orientation, Registry};
pub use results::{ResultsTable, ScoreRow, SuccessLog, SuccessRow};
pub use summary::{dataset_summary, DatasetSummary};

/// Whether a column holds numbers or category codes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Nominal { categories: Vec<String> },
}

impl ColumnKind {
    pub fn is_numeric(&self) -> bool {
        matches!(self, ColumnKind::Numeric)
    }
}

/// A named column of a feature matrix. Nominal values are stored as
/// category codes (indices into `categories`); `None` marks a missing entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
    pub values: Vec<Option<f64>>,
}

impl Column {
    pub fn numeric(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Numeric,
            values,
        }
    }

    /// Builds a nominal column from raw category strings, assigning codes
    /// in order of first appearance.
    pub fn nominal_from_strings<S: AsRef<str>>(name: impl Into<String>, raw: &[Option<S>]) -> Self {
        let mut categories: Vec<String> = Vec::new();
        let values = raw
            .iter()
            .map(|v| {
                v.as_ref().map(|s| {
                    let s = s.as_ref();
                    match categories.iter().position(|c| c == s) {
                        Some(i) => i as f64,
                        None => {
                            categories.push(s.to_string());
                            (categories.len() - 1) as f64
                        }
                    }
                })
            })
            .collect();
        Column {
            name: name.into(),
            kind: ColumnKind::Nominal { categories },
            values,
        }
    }

    /// Human-readable value of row `i` (`None` when missing).
    pub fn display_value(&self, i: usize) -> Option<String> {
        let v = self.values[i]?;
        Some(match &self.kind {
            ColumnKind::Numeric => format!("{v}"),
            ColumnKind::Nominal { categories } => categories[v as usize].clone(),
        })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if let ColumnKind::Nominal { categories } = &self.kind {
            for v in self.values.iter().flatten() {
                if v.fract() != 0.0 || *v < 0.0 || (*v as usize) >= categories.len() {
                    return Err(Error::Schema(format!(
                        "column '{}' holds code {v} outside its {} categories",
                        self.name,
                        categories.len()
                    )));
                }
            }
        } else if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Schema(format!(
                "numeric column '{}' holds a non-finite value",
                self.name
            )));
        }
        Ok(())
    }
}

/// Sparse binary label matrix: each row lists the indices of its relevant
/// labels in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMatrix {
    n_labels: usize,
    rows: Vec<Vec<u32>>,
}

impl LabelMatrix {
    pub fn new(n_labels: usize, mut rows: Vec<Vec<u32>>) -> Result<Self> {
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if let Some(&l) = row.last() {
                if l as usize >= n_labels {
                    return Err(Error::Schema(format!(
                        "row {i} references label {l} but only {n_labels} labels exist"
                    )));
                }
            }
        }
        Ok(LabelMatrix { n_labels, rows })
    }

    pub fn from_dense(dense: &[Vec<bool>], n_labels: usize) -> Result<Self> {
        let rows = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(l, _)| l as u32)
                    .collect()
            })
            .collect();
        Self::new(n_labels, rows)
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn contains(&self, i: usize, label: usize) -> bool {
        self.rows[i].binary_search(&(label as u32)).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<bool>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![false; self.n_labels];
                for &l in r {
                    d[l as usize] = true;
                }
                d
            })
            .collect()
    }

    /// Number of examples each label is relevant for.
    pub fn label_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_labels];
        for r in &self.rows {
            for &l in r {
                counts[l as usize] += 1;
            }
        }
        counts
    }

    /// Frequency of every distinct labelset, keyed by the sorted label list.
    pub fn labelset_counts(&self) -> BTreeMap<&[u32], usize> {
        let mut counts = BTreeMap::new();
        for r in &self.rows {
            *counts.entry(r.as_slice()).or_insert(0) += 1;
        }
        counts
    }

    pub fn select_rows(&self, indices: &[usize]) -> LabelMatrix {
        LabelMatrix {
            n_labels: self.n_labels,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Train,
    Test,
    Full,
}

/// One multi-label dataset (or one part of it). Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlcDataset {
    name: String,
    role: Role,
    features: Vec<Column>,
    labels: LabelMatrix,
    label_names: Vec<String>,
}

impl MlcDataset {
    pub fn new(
        name: impl Into<String>,
        role: Role,
        features: Vec<Column>,
        labels: LabelMatrix,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let n = labels.n_rows();
        if n == 0 {
            return Err(Error::Schema("dataset has no instances".into()));
        }
        if features.is_empty() {
            return Err(Error::Schema("dataset has no feature columns".into()));
        }
        if labels.n_labels() < 2 {
            return Err(Error::Schema(format!(
                "multi-label datasets need at least 2 labels, got {}",
                labels.n_labels()
            )));
        }
        if label_names.len() != labels.n_labels() {
            return Err(Error::Schema(format!(
                "{} label names for {} labels",
                label_names.len(),
                labels.n_labels()
            )));
        }
        for f in &features {
            if f.values.len() != n {
                return Err(Error::Schema(format!(
                    "feature '{}' has {} values for {n} instances",
                    f.name,
                    f.values.len()
                )));
            }
            f.validate()?;
        }
        Ok(MlcDataset {
            name: name.into(),
            role,
            features,
            labels,
            label_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn features(&self) -> &[Column] {
        &self.features
    }

    pub fn labels(&self) -> &LabelMatrix {
        &self.labels
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn n_instances(&self) -> usize {
        self.labels.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn n_labels(&self) -> usize {
        self.labels.n_labels()
    }

    /// The subset of rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<MlcDataset> {
        let features = self
            .features
            .iter()
            .map(|f| Column {
                name: f.name.clone(),
                kind: f.kind.clone(),
                values: indices.iter().map(|&i| f.values[i]).collect(),
            })
            .collect();
        MlcDataset::new(
            self.name.clone(),
            self.role,
            features,
            self.labels.select_rows(indices),
            self.label_names.clone(),
        )
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub(crate) fn same_schema(&self, other: &MlcDataset) -> bool {
        self.n_labels() == other.n_labels()
            && self.n_features() == other.n_features()
            && self
                .features
                .iter()
                .zip(&other.features)
                .all(|(a, b)| a.kind.is_numeric() == b.kind.is_numeric())
    }
}
