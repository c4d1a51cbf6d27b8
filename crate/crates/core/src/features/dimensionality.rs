use super::PartialFeatures;
use crate::data::MlcDataset;

/// Size features: counts of attributes, instances, labels and labelsets,
/// and their products and ratios.
pub fn compute_dimensionality(ds: &MlcDataset) -> PartialFeatures {
    let n = ds.n_instances() as f64;
    let d = ds.n_features() as f64;
    let l = ds.n_labels() as f64;
    let distinct = ds.labels().labelset_counts().len() as f64;

    let mut out = PartialFeatures::default();
    out.set("D.1", d);
    out.set("D.2", n);
    out.set("D.3", l);
    out.set("D.4", distinct);
    out.set("D.5", l * n * d);
    out.set("D.6", n / d);
    out.set("D.7", d / n);
    out.set("D.8", n / l);
    out.set("D.9", l / n);
    out.set("D.10", d / l);
    out.set("D.11", l / d);
    out.set("D.12", n * d);
    out.set("D.13", n * l);
    out.set("D.14", d * l);
    out.set("D.15", distinct / n);
    out
}
