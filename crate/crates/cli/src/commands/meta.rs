use serde_json::json;

use mlc_meta::data::{ResultsTable, SuccessLog};
use mlc_meta::pct::{learn, LearnParams, Mode, F_LEVELS};
use mlc_meta::pipeline::{self, assemble, loo_evaluate, MetaMatrix, TargetKind};

use super::*;
use crate::config::{pick, Run};
use crate::output::Output;

fn meta_inputs(m: &MetaInputs) -> Vec<(&'static str, &Path)> {
    let mut v: Vec<(&str, &Path)> = vec![("meta", &m.meta), ("results", &m.results)];
    if let Some(r) = &m.registry {
        v.push(("registry", r));
    }
    v
}

fn load_meta(m: &MetaInputs) -> anyhow::Result<(MetaMatrix, ResultsTable, Registry)> {
    check_inputs(&meta_inputs(m))?;
    let registry = load_registry(m.registry.as_deref())?;
    let meta = MetaMatrix::load(&m.meta)?;
    let results = ResultsTable::load(&m.results, &registry)?;
    Ok((meta, results, registry))
}

fn loo_run(run: &Run, name: &str, inputs: &MetaInputs, a: &LooArgs, kind: TargetKind) -> anyhow::Result<Output> {
    let (meta, results, registry) = load_meta(inputs)?;
    let f_grid = pick(&a.f_grid, &run.file.f_grid, F_LEVELS.to_vec());
    let min_leaf = pick(&a.min_leaf, &run.file.min_leaf, LearnParams::default().min_leaf);
    let methods = a.methods.clone().unwrap_or_default();
    let md = assemble(&meta, &results, &registry, &a.measure, &methods, kind, a.allow_missing)?;
    let report = loo_evaluate(&md, &f_grid, min_leaf)?;
    let rows: Vec<usize> = (0..md.n_rows()).collect();
    let mode = if md.is_classification() {
        Mode::Classification
    } else {
        Mode::Regression
    };
    let tree = learn(
        &md.table(&rows)?,
        mode,
        LearnParams {
            f_level: report.chosen_f_level,
            min_leaf,
        },
    )?;

    let mut out = Output::new(
        name,
        run.seed,
        &meta_inputs(inputs),
        json!({
            "measure": a.measure,
            "methods": methods,
            "target": kind,
            "f_grid": f_grid,
            "min_leaf": min_leaf,
            "allow_missing": a.allow_missing,
        }),
    );
    out.json("loo_report.json", &json!({ "report": report, "dropped": md.dropped }))?;
    out.csv("meta_dataset.csv", &md.to_csv()?);
    out.json("tree.json", &tree)?;
    out.text("tree.txt", &tree.to_text());
    Ok(out)
}

pub fn perf_model(run: &Run, a: &PerfModelArgs) -> anyhow::Result<Output> {
    let kind = match a.target {
        PerfTarget::Scores => TargetKind::Scores,
        PerfTarget::Best => TargetKind::Best,
    };
    loo_run(run, "perf-model", &a.inputs, &a.loo, kind)
}

pub fn best_method(run: &Run, a: &BestMethodArgs) -> anyhow::Result<Output> {
    loo_run(run, "best-method", &a.inputs, &a.loo, TargetKind::Best)
}

pub fn tune_or_not(run: &Run, a: &TuneOrNotArgs) -> anyhow::Result<Output> {
    let (meta, results, registry) = load_meta(&a.inputs)?;
    let f_grid = pick(&a.f_grid, &run.file.f_grid, F_LEVELS.to_vec());
    let min_leaf = pick(&a.min_leaf, &run.file.min_leaf, LearnParams::default().min_leaf);
    let measures = pick(&a.measures, &run.file.measures, vec![a.measure.clone()]);
    let report = pipeline::tune_or_not(
        &meta,
        &results,
        &registry,
        &a.measure,
        &f_grid,
        min_leaf,
        a.allow_missing,
    )?;
    let differences = pipeline::difference_boxplot_data(&results, &registry, &measures)?;
    let mut out = Output::new(
        "tune-or-not",
        run.seed,
        &meta_inputs(&a.inputs),
        json!({
            "measure": a.measure,
            "difference_measures": measures,
            "f_grid": f_grid,
            "min_leaf": min_leaf,
            "allow_missing": a.allow_missing,
            "reliable_defaults": registry.reliable_defaults(),
        }),
    );
    out.json("tune_report.json", &report)?;
    out.text("tree.txt", &report.tree.to_text());
    out.json("group_differences.json", &differences)?;
    Ok(out)
}

pub fn landscape(run: &Run, a: &LandscapeArgs) -> anyhow::Result<Output> {
    let (meta, results, registry) = load_meta(&a.inputs)?;
    let measures = match a.measures.as_ref().or(run.file.measures.as_ref()) {
        Some(m) => m.clone(),
        None => anyhow::bail!(mlc_meta::Error::Contract("landscape needs --measures".into())),
    };
    let k_top = pick(&a.k_top, &run.file.k_top, 3);
    let d = LearnParams::default();
    let params = LearnParams {
        f_level: pick(&a.f_level, &run.file.f_level, d.f_level),
        min_leaf: pick(&a.min_leaf, &run.file.min_leaf, d.min_leaf),
    };
    let ls = pipeline::landscape(&meta, &results, &registry, &measures, k_top, params)?;
    let mut out = Output::new(
        "landscape",
        run.seed,
        &meta_inputs(&a.inputs),
        json!({ "measures": measures, "k_top": k_top, "learn": params }),
    );
    out.json("landscape.json", &ls)?;
    out.dot("landscape.dot", &ls.to_dot());
    Ok(out)
}

pub fn rsed(run: &Run, a: &RsedArgs) -> anyhow::Result<Output> {
    let inputs: Vec<(&str, &Path)> = vec![("log", &a.log)];
    check_inputs(&inputs)?;
    let report = pipeline::rsed(&SuccessLog::load(&a.log)?)?;
    let mut csv = String::from("dataset,method,rsed\n");
    for c in &report.cells {
        csv.push_str(&format!("{},{},{}\n", c.dataset, c.method, c.rsed));
    }
    let mut out = Output::new("rsed", run.seed, &inputs, json!({}));
    out.json("rsed.json", &report)?;
    out.csv("rsed_cells.csv", &csv);
    Ok(out)
}

pub fn improvement(run: &Run, a: &ImprovementArgs) -> anyhow::Result<Output> {
    let mut inputs: Vec<(&str, &Path)> = vec![("results", &a.results)];
    if let Some(r) = &a.registry {
        inputs.push(("registry", r));
    }
    check_inputs(&inputs)?;
    let registry = load_registry(a.registry.as_deref())?;
    let results = ResultsTable::load(&a.results, &registry)?;
    let report = pipeline::improvement_histograms(&results, &a.default_measure, &a.tuned_measure, a.bins)?;
    let mut out = Output::new(
        "improvement",
        run.seed,
        &inputs,
        json!({ "default_measure": a.default_measure, "tuned_measure": a.tuned_measure, "bins": a.bins }),
    );
    out.json("improvement.json", &report)?;
    Ok(out)
}
