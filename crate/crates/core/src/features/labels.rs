use super::PartialFeatures;
use crate::data::MlcDataset;
use crate::stats::{binary_entropy, kurtosis, mean, skewness};

/// Cardinality, density, label entropies and the shape of the
/// labelset-size distribution.
pub fn compute_label_distribution(ds: &MlcDataset) -> PartialFeatures {
    let n = ds.n_instances();
    let sizes: Vec<f64> = ds.labels().rows().map(|r| r.len() as f64).collect();
    let cardinality = mean(&sizes);
    let counts = ds.labels().label_counts();
    let entropies: Vec<f64> = counts.iter().map(|&c| binary_entropy(c, n)).collect();

    let mut out = PartialFeatures::default();
    out.set("L.DL.G.1", cardinality);
    out.set("L.DL.G.2", cardinality / ds.n_labels() as f64);
    out.set("L.DL.G.3", mean(&entropies));
    out.set("L.DL.G.4", skewness(&sizes));
    out.set("L.DL.G.5", entropies.iter().copied().fold(0.0, f64::max));
    out.set("L.DL.G.6", kurtosis(&sizes));
    let min_count = counts.iter().copied().min().unwrap_or(0);
    out.set("L.DL.G.7", min_count as f64 / n as f64);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, LabelMatrix, Role};

    fn ds(rows: Vec<Vec<u32>>, l: usize) -> MlcDataset {
        let n = rows.len();
        MlcDataset::new(
            "t",
            Role::Train,
            vec![Column::numeric("x", vec![Some(0.0); n])],
            LabelMatrix::new(l, rows).unwrap(),
            (0..l).map(|j| format!("l{j}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn toy_cardinality_and_density() {
        let f = compute_label_distribution(&ds(vec![vec![0], vec![0, 1], vec![1, 2], vec![]], 3));
        assert_eq!(f.get("L.DL.G.1"), Some(1.25));
        assert!((f.get("L.DL.G.2").unwrap() - 0.416_67).abs() < 1e-5);
    }

    #[test]
    fn balanced_label_has_unit_entropy() {
        let f = compute_label_distribution(&ds(vec![vec![0], vec![], vec![0, 1], vec![]], 2));
        assert_eq!(f.get("L.DL.G.5"), Some(1.0));
    }

    #[test]
    fn equal_sizes_give_zero_kurtosis() {
        let f = compute_label_distribution(&ds(vec![vec![0], vec![1], vec![2]], 3));
        assert_eq!(f.get("L.DL.G.6"), Some(0.0));
        assert_eq!(f.get("L.DL.G.4"), Some(0.0));
    }
}
