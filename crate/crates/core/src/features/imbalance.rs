use super::{labelset_frequencies, PartialFeatures};
use crate::data::MlcDataset;
use crate::stats::{coefficient_of_variation, mean};

/// Per-label imbalance ratio: count of the most frequent label over the
/// count of this label. `None` for labels without positives.
pub fn irlbl(counts: &[usize]) -> Vec<Option<f64>> {
    let max = counts.iter().copied().max().unwrap_or(0);
    counts.iter().map(|&c| (c > 0).then(|| max as f64 / c as f64)).collect()
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Inter-class (between labels) and intra-class (within a label, and
/// between labelsets) imbalance ratios.
pub fn compute_imbalance(ds: &MlcDataset) -> PartialFeatures {
    let mut out = PartialFeatures::default();
    let n = ds.n_instances();
    let counts = ds.labels().label_counts();

    let ir = irlbl(&counts);
    for (l, v) in ir.iter().enumerate() {
        if v.is_none() {
            out.note(format!(
                "label '{}' has no positive examples; excluded from IRLbl aggregates",
                ds.label_names()[l]
            ));
        }
    }
    let defined: Vec<f64> = ir.iter().flatten().copied().collect();
    if defined.is_empty() {
        out.note("no label has positives: inter-class IR features set to 1, 1, 0");
        out.set("L.DL.I.E.1", 1.0);
        out.set("L.DL.I.E.2", 1.0);
        out.set("L.DL.I.E.3", 0.0);
    } else {
        out.set("L.DL.I.E.1", mean(&defined));
        out.set("L.DL.I.E.2", max_of(&defined));
        out.set("L.DL.I.E.3", coefficient_of_variation(&defined));
    }

    let intra: Vec<f64> = counts
        .iter()
        .filter(|&&c| c > 0 && c < n)
        .map(|&c| {
            let (lo, hi) = if c < n - c { (c, n - c) } else { (n - c, c) };
            hi as f64 / lo as f64
        })
        .collect();
    if intra.is_empty() {
        out.note("no label has both classes: intra-class IR features set to 1, 1, 0");
        out.set("L.DL.I.A.1", 1.0);
        out.set("L.DL.I.A.2", 1.0);
        out.set("L.DL.I.A.3", 0.0);
    } else {
        out.set("L.DL.I.A.1", mean(&intra));
        out.set("L.DL.I.A.2", max_of(&intra));
        out.set("L.DL.I.A.3", coefficient_of_variation(&intra));
    }

    let freq = labelset_frequencies(ds);
    let top = freq.iter().copied().max().unwrap_or(1) as f64;
    let per_set: Vec<f64> = freq.iter().map(|&c| top / c as f64).collect();
    out.set("L.DL.I.A.4", mean(&per_set));
    out.set("L.DL.I.A.5", max_of(&per_set));
    out
}
