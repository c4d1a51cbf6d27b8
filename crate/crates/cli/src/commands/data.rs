use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::json;

use mlc_meta::data::dataset_summary;
use mlc_meta::features::{compute_all, matrix_to_csv, Catalogue, FeatureParams};
use mlc_meta::stratify::{iterative_stratified_folds, label_divergence, stratified_subsample, Quota};
use mlc_meta::Error;

use super::*;
use crate::config::{pick, Run};
use crate::output::Output;

pub fn meta_features(run: &Run, a: &MetaFeaturesArgs) -> anyhow::Result<Output> {
    let mut inputs: Vec<(&str, &Path)> = a.dataset.iter().map(|p| ("dataset", p.as_path())).collect();
    if let Some(c) = &a.catalogue {
        inputs.push(("catalogue", c));
    }
    check_inputs(&inputs)?;
    let catalogue = match &a.catalogue {
        Some(p) => Catalogue::load(p)?,
        None => Catalogue::default(),
    };
    let params = FeatureParams {
        dependence_alpha: pick(
            &a.dependence_alpha,
            &run.file.dependence_alpha,
            catalogue.params.dependence_alpha,
        ),
        small_set_threshold: pick(
            &a.small_set_threshold,
            &run.file.small_set_threshold,
            catalogue.params.small_set_threshold,
        ),
    };
    let mut vectors = vec![];
    let mut diagnostics = BTreeMap::new();
    for p in &a.dataset {
        let ds = load_dataset(p, &a.labels)?;
        let report = compute_all(&ds, &catalogue, &params)?;
        if diagnostics
            .insert(report.vector.dataset.clone(), report.diagnostics)
            .is_some()
        {
            return Err(Error::Contract(format!("dataset name '{}' given twice", report.vector.dataset)).into());
        }
        vectors.push(report.vector);
    }
    let mut out = Output::new(
        "meta-features",
        run.seed,
        &inputs,
        json!({ "labels": a.labels, "feature_params": params, "catalogue": catalogue.version }),
    );
    out.csv("meta_features.csv", &matrix_to_csv(&vectors, &catalogue)?);
    out.json(
        "meta_features.json",
        &json!({ "vectors": vectors, "diagnostics": diagnostics }),
    )?;
    Ok(out)
}

pub fn summarize(run: &Run, a: &SummarizeArgs) -> anyhow::Result<Output> {
    let mut inputs: Vec<(&str, &Path)> = vec![("dataset", &a.dataset)];
    if let Some(t) = &a.test {
        inputs.push(("test", t));
    }
    check_inputs(&inputs)?;
    let train = load_dataset(&a.dataset, &a.labels)?;
    let test = a.test.as_ref().map(|t| load_dataset(t, &a.labels)).transpose()?;
    let parts = dataset_summary(&train, test.as_ref())?;
    let p = a.precision;
    let mut csv =
        String::from("dataset,part,n_instances,n_features,n_labels,cardinality,density,n_distinct_labelsets\n");
    for s in &parts {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{:.p$},{:.p$},{}",
            train.name(),
            s.part,
            s.n_instances,
            s.n_features,
            s.n_labels,
            s.cardinality,
            s.density,
            s.n_distinct_labelsets
        );
    }
    let mut out = Output::new(
        "summarize",
        run.seed,
        &inputs,
        json!({ "labels": a.labels, "precision": p }),
    );
    out.csv("summary.csv", &csv);
    out.json("summary.json", &json!({ "dataset": train.name(), "parts": parts }))?;
    Ok(out)
}

pub fn stratify(run: &Run, a: &StratifyArgs) -> anyhow::Result<Output> {
    let inputs: Vec<(&str, &Path)> = vec![("dataset", &a.dataset)];
    check_inputs(&inputs)?;
    let ds = load_dataset(&a.dataset, &a.labels)?;
    let quota = match a.quota {
        QuotaArg::Labels => Quota::Labels,
        QuotaArg::Labelsets => Quota::Labelsets,
    };
    let labels = ds.labels();
    let out = match a.subsample {
        Some(m) => {
            let chosen = stratified_subsample(labels, m, run.seed, quota)?;
            let mut out = Output::new(
                "stratify",
                run.seed,
                &inputs,
                json!({ "labels": a.labels, "subsample": m, "quota": quota }),
            );
            let mut membership = vec![1; labels.n_rows()];
            for &i in &chosen {
                membership[i] = 0;
            }
            let mut csv = String::from("example_index\n");
            for i in &chosen {
                let _ = writeln!(csv, "{i}");
            }
            out.csv("subsample.csv", &csv);
            out.json(
                "stratification.json",
                &json!({
                    "subsample_size": chosen.len(),
                    "quota": quota,
                    "label_divergence": label_divergence(labels, &membership, 2),
                }),
            )?;
            out
        }
        None => {
            let folds = iterative_stratified_folds(labels, a.folds, run.seed, quota)?;
            let mut out = Output::new(
                "stratify",
                run.seed,
                &inputs,
                json!({ "labels": a.labels, "folds": a.folds, "quota": quota }),
            );
            out.csv("folds.csv", &folds.to_csv());
            out.json(
                "stratification.json",
                &json!({
                    "k": folds.k,
                    "quota": quota,
                    "sizes": folds.sizes(),
                    "label_divergence": label_divergence(labels, &folds.folds, folds.k),
                }),
            )?;
            out
        }
    };
    Ok(out)
}
