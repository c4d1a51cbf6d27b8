use super::PartialFeatures;
use crate::data::{ColumnKind, MlcDataset};
use crate::stats::{entropy_of_counts, kurtosis, mean, skewness, std_dev};

/// Attribute-type counts, averaged moments of numeric attributes, and
/// information-theoretic summaries of nominal attributes.
pub fn compute_attribute_stats(ds: &MlcDataset) -> PartialFeatures {
    let mut out = PartialFeatures::default();
    let numeric: Vec<_> = ds.features().iter().filter(|c| c.kind.is_numeric()).collect();
    out.set("A.SF.1", numeric.len() as f64);
    out.set("A.SF.2", (ds.n_features() - numeric.len()) as f64);

    let (mut means, mut stds, mut skews, mut kurts) = (vec![], vec![], vec![], vec![]);
    for col in &numeric {
        let xs: Vec<f64> = col.values.iter().flatten().copied().collect();
        if xs.is_empty() {
            out.note(format!(
                "numeric attribute '{}' has no observed values; excluded",
                col.name
            ));
            continue;
        }
        means.push(mean(&xs));
        stds.push(std_dev(&xs));
        skews.push(skewness(&xs));
        kurts.push(kurtosis(&xs));
    }
    if means.is_empty() {
        out.note("no numeric attributes with data: A.SF.3-A.SF.6 set to 0");
    }
    out.set("A.SF.3", mean(&skews));
    out.set("A.SF.4", mean(&means));
    out.set("A.SF.5", mean(&stds));
    out.set("A.SF.6", mean(&kurts));

    // (codes, number of categories) of each nominal attribute
    let nominal: Vec<(Vec<Option<usize>>, usize)> = ds
        .features()
        .iter()
        .filter_map(|c| match &c.kind {
            ColumnKind::Nominal { categories } => Some((
                c.values.iter().map(|v| v.map(|x| x as usize)).collect(),
                categories.len(),
            )),
            ColumnKind::Numeric => None,
        })
        .collect();

    let entropies: Vec<f64> = nominal
        .iter()
        .map(|(codes, k)| {
            let mut counts = vec![0usize; *k];
            for c in codes.iter().flatten() {
                counts[*c] += 1;
            }
            entropy_of_counts(counts)
        })
        .collect();
    if nominal.is_empty() {
        out.note("no nominal attributes: A.IT.1 and A.IT.2 set to 0");
    }
    out.set("A.IT.1", mean(&entropies));

    let per_label: Vec<f64> = (0..ds.n_labels())
        .map(|l| {
            let ratios: Vec<f64> = nominal
                .iter()
                .map(|(codes, k)| gain_ratio(codes, *k, |i| ds.labels().contains(i, l)))
                .collect();
            mean(&ratios)
        })
        .collect();
    out.set("A.IT.2", if nominal.is_empty() { 0.0 } else { mean(&per_label) });
    out
}

/// Gain ratio of a nominal attribute with respect to a binary target, over
/// the rows where the attribute is observed. Zero split information gives 0.
fn gain_ratio(codes: &[Option<usize>], k: usize, target: impl Fn(usize) -> bool) -> f64 {
    // counts[v] = (rows with value v, of which target is true)
    let mut counts = vec![(0usize, 0usize); k];
    for (i, c) in codes.iter().enumerate() {
        if let Some(v) = c {
            counts[*v].0 += 1;
            if target(i) {
                counts[*v].1 += 1;
            }
        }
    }
    let n: usize = counts.iter().map(|c| c.0).sum();
    if n == 0 {
        return 0.0;
    }
    let split_info = entropy_of_counts(counts.iter().map(|c| c.0));
    if split_info == 0.0 {
        return 0.0;
    }
    let pos: usize = counts.iter().map(|c| c.1).sum();
    let h = entropy_of_counts([pos, n - pos]);
    let conditional: f64 = counts
        .iter()
        .filter(|c| c.0 > 0)
        .map(|&(m, p)| m as f64 / n as f64 * entropy_of_counts([p, m - p]))
        .sum();
    ((h - conditional) / split_info).max(0.0)
}
