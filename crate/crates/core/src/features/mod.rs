//! Meta features of multi-label datasets, organised by the taxonomy
//! groups of [`catalogue::GROUPS`]. Every feature is computed on the
//! training part only.

mod attributes;
pub mod catalogue;
mod dimensionality;
mod imbalance;
mod labels;
mod relationships;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::MlcDataset;
use crate::error::{Error, Result};

pub use attributes::compute_attribute_stats;
pub use catalogue::{Catalogue, CatalogueEntry, Duplication, FeatureParams, ValueRange};
pub use dimensionality::compute_dimensionality;
pub use imbalance::{compute_imbalance, irlbl};
pub use labels::compute_label_distribution;
pub use relationships::{compute_relationships, pair_chi_square};

/// Feature values produced by one family, plus notes on any sentinel
/// substitutions or excluded inputs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialFeatures {
    pub values: Vec<(&'static str, f64)>,
    pub diagnostics: Vec<String>,
}

impl PartialFeatures {
    fn set(&mut self, id: &'static str, value: f64) {
        self.values.push((id, value));
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == id).map(|&(_, v)| v)
    }

    fn merge(&mut self, other: PartialFeatures) {
        self.values.extend(other.values);
        self.diagnostics.extend(other.diagnostics);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureValue {
    pub id: String,
    pub value: f64,
}

/// Meta-feature values of a dataset, in catalogue order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaFeatureVector {
    pub dataset: String,
    pub catalogue_version: String,
    pub features: Vec<FeatureValue>,
}

impl MetaFeatureVector {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.features.iter().find(|f| f.id == id).map(|f| f.value)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Result of [`compute_all`]: the vector and the diagnostics channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaFeatureReport {
    pub vector: MetaFeatureVector,
    pub diagnostics: Vec<String>,
}

/// Computes every family and keeps exactly the catalogue's identifiers,
/// in catalogue order.
pub fn compute_all(train: &MlcDataset, catalogue: &Catalogue, params: &FeatureParams) -> Result<MetaFeatureReport> {
    let ((dim, attr), (dist, (imb, rel))) = rayon::join(
        || (compute_dimensionality(train), compute_attribute_stats(train)),
        || {
            (
                compute_label_distribution(train),
                rayon::join(|| compute_imbalance(train), || compute_relationships(train, params)),
            )
        },
    );
    let mut all = dim;
    for part in [attr, dist, imb, rel?] {
        all.merge(part);
    }
    let lookup: BTreeMap<&str, f64> = all.values.iter().copied().collect();
    let mut features = Vec::with_capacity(catalogue.len());
    for entry in &catalogue.entries {
        let value = *lookup
            .get(entry.id.as_str())
            .ok_or_else(|| Error::Contract(format!("no definition for catalogue feature '{}'", entry.id)))?;
        debug_assert!(value.is_finite(), "{} = {value}", entry.id);
        if !value.is_finite() {
            return Err(Error::Contract(format!("feature '{}' evaluated to {value}", entry.id)));
        }
        features.push(FeatureValue {
            id: entry.id.clone(),
            value,
        });
    }
    Ok(MetaFeatureReport {
        vector: MetaFeatureVector {
            dataset: train.name().to_string(),
            catalogue_version: catalogue.version.clone(),
            features,
        },
        diagnostics: all.diagnostics,
    })
}

/// Meta-feature matrix as CSV: one row per dataset, one column per feature.
pub fn matrix_to_csv(vectors: &[MetaFeatureVector], catalogue: &Catalogue) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["dataset".to_string()];
    header.extend(catalogue.ids().map(str::to_string));
    w.write_record(&header)?;
    for v in vectors {
        let mut rec = vec![v.dataset.clone()];
        for id in catalogue.ids() {
            let x = v
                .get(id)
                .ok_or_else(|| Error::Contract(format!("vector for '{}' lacks '{id}'", v.dataset)))?;
            rec.push(format!("{x}"));
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// Frequencies of the distinct labelsets, in labelset order.
pub(crate) fn labelset_frequencies(ds: &MlcDataset) -> Vec<usize> {
    ds.labels().labelset_counts().into_values().collect()
}
