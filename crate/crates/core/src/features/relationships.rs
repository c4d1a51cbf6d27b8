use super::{irlbl, labelset_frequencies, FeatureParams, PartialFeatures};
use crate::data::MlcDataset;
use crate::error::{Error, Result};
use crate::stats::{chi_square_critical, coefficient_of_variation, mean, std_dev};

/// Chi-square statistic and phi coefficient of a 2x2 co-occurrence table
/// (`both`, `only_a`, `only_b`, `neither`), without continuity correction.
/// Tables with an empty margin give (0, 0).
pub fn pair_chi_square(both: usize, only_a: usize, only_b: usize, neither: usize) -> (f64, f64) {
    let (a, b, c, d) = (both as f64, only_a as f64, only_b as f64, neither as f64);
    let n = a + b + c + d;
    let margins = (a + b) * (c + d) * (a + c) * (b + d);
    if margins == 0.0 {
        return (0.0, 0.0);
    }
    let diff = a * d - b * c;
    (n * diff * diff / margins, diff / margins.sqrt())
}

/// Labelset structure, SCUMBLE and pairwise label dependence.
pub fn compute_relationships(ds: &MlcDataset, params: &FeatureParams) -> Result<PartialFeatures> {
    let alpha = params.dependence_alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Contract(format!(
            "dependence_alpha must lie in (0,1), got {alpha}"
        )));
    }
    let mut out = PartialFeatures::default();
    let n = ds.n_instances();
    let n_labels = ds.n_labels();
    let freq = labelset_frequencies(ds);
    let distinct = freq.len() as f64;

    out.set("L.RL.1", distinct / 2f64.powi(n_labels as i32));
    out.set("L.RL.2", freq.iter().filter(|&&c| c == 1).count() as f64 / n as f64);

    let ir = irlbl(&ds.labels().label_counts());
    let per_instance: Vec<f64> = ds
        .labels()
        .rows()
        .map(|row| {
            let irs: Vec<f64> = row.iter().map(|&l| ir[l as usize].expect("present label")).collect();
            if irs.windows(2).all(|w| w[0] == w[1]) {
                return 0.0;
            }
            let k = irs.len() as f64;
            let geo = (irs.iter().map(|x| x.ln()).sum::<f64>() / k).exp();
            (1.0 - geo / mean(&irs)).clamp(0.0, 1.0)
        })
        .collect();
    out.set("L.RL.3", mean(&per_instance));
    out.set("L.RL.4", coefficient_of_variation(&per_instance));

    let counts: Vec<f64> = freq.iter().map(|&c| c as f64).collect();
    out.set("L.RL.5", n as f64 / distinct);
    let small = freq.iter().filter(|&&c| c <= params.small_set_threshold).count();
    out.set("L.RL.6", small as f64 / distinct);
    out.set("L.RL.7", counts.iter().copied().fold(0.0, f64::max));
    out.set("L.RL.8", std_dev(&counts));

    let label_counts = ds.labels().label_counts();
    let mut co = vec![vec![0usize; n_labels]; n_labels];
    for row in ds.labels().rows() {
        for (i, &a) in row.iter().enumerate() {
            for &b in &row[i + 1..] {
                co[a as usize][b as usize] += 1;
            }
        }
    }
    let critical = chi_square_critical(alpha);
    let (mut chi_sum, mut phi_sum, mut dependent) = (0.0, 0.0, 0usize);
    for a in 0..n_labels {
        for b in a + 1..n_labels {
            let both = co[a][b];
            let only_a = label_counts[a] - both;
            let only_b = label_counts[b] - both;
            let neither = n - both - only_a - only_b;
            let (chi, phi) = pair_chi_square(both, only_a, only_b, neither);
            chi_sum += chi;
            phi_sum += phi.abs();
            if chi > critical {
                dependent += 1;
            }
        }
    }
    let pairs = (n_labels * (n_labels - 1) / 2) as f64;
    out.set("L.RL.9", chi_sum / pairs);
    out.set("L.RL.10", phi_sum / pairs);
    out.set("L.RL.11", dependent as f64);
    out.set("L.RL.12", dependent as f64 / pairs);
    Ok(out)
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
    fn perfectly_co_occurring_pair() {
        let (chi, phi) = pair_chi_square(20, 0, 0, 20);
        assert_eq!(chi, 40.0);
        assert_eq!(phi, 1.0);
        let mut rows = vec![vec![0, 1]; 20];
        rows.extend(vec![vec![]; 20]);
        let f = compute_relationships(&ds(rows, 2), &FeatureParams::default()).unwrap();
        assert_eq!(f.get("L.RL.11"), Some(1.0));
        assert_eq!(f.get("L.RL.12"), Some(1.0));
    }

    #[test]
    fn independent_pair_has_zero_statistic() {
        assert_eq!(pair_chi_square(5, 5, 5, 5).0, 0.0);
    }

    #[test]
    fn zero_variance_label_not_dependent() {
        let f = compute_relationships(&ds(vec![vec![0]; 30], 2), &FeatureParams::default()).unwrap();
        assert_eq!(f.get("L.RL.11"), Some(0.0));
    }

    #[test]
    fn balanced_labels_give_zero_scumble() {
        let f = compute_relationships(&ds(vec![vec![0, 1], vec![0], vec![1]], 2), &FeatureParams::default()).unwrap();
        assert_eq!(f.get("L.RL.3"), Some(0.0));
    }

    #[test]
    fn scumble_by_hand() {
        // counts: l0 = 3, l1 = 1 -> IRLbl = (1, 3)
        // row {0,1}: 1 - sqrt(3) / 2
        let rows = vec![vec![0, 1], vec![0], vec![0], vec![]];
        let f = compute_relationships(&ds(rows, 2), &FeatureParams::default()).unwrap();
        let expected = (1.0 - 3f64.sqrt() / 2.0) / 4.0;
        assert!((f.get("L.RL.3").unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn alpha_out_of_range() {
        let p = FeatureParams {
            dependence_alpha: 1.0,
            ..Default::default()
        };
        assert!(compute_relationships(&ds(vec![vec![0]], 2), &p).is_err());
    }
}
