//! The published property table of the 40 benchmark datasets, shipped as a
//! fixture for consistency checks.

use serde::Deserialize;

use crate::error::Result;

pub const DATASET_PROPERTIES_CSV: &str = include_str!("../../fixtures/dataset_properties.csv");

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceRow {
    pub dataset: String,
    pub domain: String,
    pub n_train: usize,
    pub n_test: usize,
    pub n_features: usize,
    pub n_labels: usize,
    pub card_train: f64,
    pub density_train: f64,
    pub card_test: f64,
    pub density_test: f64,
}

impl ReferenceRow {
    /// Largest gap between printed density and cardinality / #labels over
    /// the train and test columns.
    pub fn density_gap(&self) -> f64 {
        let l = self.n_labels as f64;
        (self.card_train / l - self.density_train)
            .abs()
            .max((self.card_test / l - self.density_test).abs())
    }
}

pub fn reference_table() -> Result<Vec<ReferenceRow>> {
    let mut rdr = csv::Reader::from_reader(DATASET_PROPERTIES_CSV.as_bytes());
    rdr.deserialize().map(|r| r.map_err(Into::into)).collect()
}
