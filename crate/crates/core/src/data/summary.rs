use serde::{Deserialize, Serialize};

use super::MlcDataset;
use crate::error::{Error, Result};

/// Size and label statistics of one dataset part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub part: String,
    pub n_instances: usize,
    pub n_features: usize,
    pub n_labels: usize,
    pub cardinality: f64,
    pub density: f64,
    pub n_distinct_labelsets: usize,
}

impl DatasetSummary {
    fn of(part: &str, ds: &MlcDataset) -> Self {
        let n = ds.n_instances();
        let total: usize = ds.labels().rows().map(<[u32]>::len).sum();
        let cardinality = total as f64 / n as f64;
        DatasetSummary {
            part: part.to_string(),
            n_instances: n,
            n_features: ds.n_features(),
            n_labels: ds.n_labels(),
            cardinality,
            density: cardinality / ds.n_labels() as f64,
            n_distinct_labelsets: ds.labels().labelset_counts().len(),
        }
    }
}

/// Per-part summaries: the training part first, then the test part if given.
pub fn dataset_summary(train: &MlcDataset, test: Option<&MlcDataset>) -> Result<Vec<DatasetSummary>> {
    let mut out = vec![DatasetSummary::of("train", train)];
    if let Some(test) = test {
        if !train.same_schema(test) {
            return Err(Error::Schema(format!(
                "test part ({} features, {} labels) does not match train part ({} features, {} labels)",
                test.n_features(),
                test.n_labels(),
                train.n_features(),
                train.n_labels()
            )));
        }
        out.push(DatasetSummary::of("test", test));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, LabelMatrix, Role};

    fn toy() -> MlcDataset {
        let labels = LabelMatrix::new(3, vec![vec![0], vec![0, 1], vec![1, 2], vec![]]).unwrap();
        MlcDataset::new(
            "toy",
            Role::Train,
            vec![Column::numeric("x", vec![Some(1.0); 4])],
            labels,
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap()
    }

    #[test]
    fn toy_cardinality_density_labelsets() {
        let s = &dataset_summary(&toy(), None).unwrap()[0];
        assert_eq!(s.cardinality, 1.25);
        assert!((s.density - 0.416_666_666_666_666_7).abs() < 1e-12);
        assert_eq!(s.n_distinct_labelsets, 4);
    }

    #[test]
    fn schema_mismatch_between_parts() {
        let train = toy();
        let test = MlcDataset::new(
            "toy",
            Role::Test,
            vec![
                Column::numeric("x", vec![Some(1.0)]),
                Column::numeric("y", vec![Some(1.0)]),
            ],
            LabelMatrix::new(3, vec![vec![]]).unwrap(),
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        assert!(matches!(dataset_summary(&train, Some(&test)), Err(Error::Schema(_))));
    }
}
