use serde_json::json;

use mlc_meta::eval::{
    apply_threshold, default_grid, evaluate_all, pcut_threshold, predicted_cardinality, read_predictions,
    EXAMPLE_BASED, LABEL_BASED, SCORE_BASED,
};
use mlc_meta::Error;

use super::*;
use crate::config::Run;
use crate::output::Output;

pub fn evaluate(run: &Run, a: &EvaluateArgs) -> anyhow::Result<Output> {
    let inputs: Vec<(&str, &Path)> = vec![("predictions", &a.predictions)];
    check_inputs(&inputs)?;
    let pred = read_predictions(&a.predictions)?;
    let measures: Vec<String> = match a.measures.as_ref().or(run.file.measures.as_ref()) {
        Some(m) => m.clone(),
        None => {
            let bipartition = pred.bipartition().is_some() || a.train_cardinality.is_some();
            let scores = pred.scores().is_some();
            EXAMPLE_BASED
                .iter()
                .chain(&LABEL_BASED)
                .filter(|_| bipartition)
                .chain(SCORE_BASED.iter().filter(|_| scores))
                .map(|s| s.to_string())
                .collect()
        }
    };
    let report = evaluate_all(&pred, a.train_cardinality, &measures)?;
    let mut out = Output::new(
        "evaluate",
        run.seed,
        &inputs,
        json!({ "measures": measures, "train_cardinality": a.train_cardinality }),
    );
    out.json("measures.json", &report)?;
    Ok(out)
}

pub fn pcut(run: &Run, a: &PcutArgs) -> anyhow::Result<Output> {
    let inputs: Vec<(&str, &Path)> = vec![("predictions", &a.predictions)];
    check_inputs(&inputs)?;
    let pred = read_predictions(&a.predictions)?;
    let scores = pred
        .scores()
        .ok_or_else(|| Error::Contract("pcut needs relevance scores".into()))?;
    let grid = a.grid.clone().unwrap_or_else(|| default_grid(scores));
    let t = pcut_threshold(a.train_cardinality, scores, &grid)?;
    let bipartition = apply_threshold(scores, t);
    let mut out = Output::new(
        "pcut",
        run.seed,
        &inputs,
        json!({ "train_cardinality": a.train_cardinality, "grid": a.grid }),
    );
    out.json(
        "pcut.json",
        &json!({
            "threshold": t,
            "train_cardinality": a.train_cardinality,
            "predicted_cardinality": predicted_cardinality(scores, t),
            "grid_size": grid.len(),
            "bipartition": bipartition.outer_iter().map(|r| r.iter().map(|&b| b as u8).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    )?;
    Ok(out)
}
