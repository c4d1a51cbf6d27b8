use std::fmt::Write;

use serde_json::json;

use mlc_meta::pct::{learn, ColumnRoles, DataTable, LearnParams, Mode, Prototype, Tree};

use super::*;
use crate::config::{pick, Run};
use crate::output::Output;

pub fn tree_learn(run: &Run, a: &TreeLearnArgs) -> anyhow::Result<Output> {
    let mut inputs: Vec<(&str, &Path)> = vec![("table", &a.table)];
    if let Some(r) = &a.roles {
        inputs.push(("roles", r));
    }
    check_inputs(&inputs)?;
    let roles = match &a.roles {
        Some(p) => ColumnRoles::load(p)?,
        None => ColumnRoles::default(),
    };
    let mode = match a.mode {
        ModeArg::Clustering => Mode::Clustering,
        ModeArg::Classification => Mode::Classification,
        ModeArg::Regression => Mode::Regression,
    };
    let table = DataTable::load(&a.table, &roles, mode)?;
    let d = LearnParams::default();
    let params = LearnParams {
        f_level: pick(&a.f_level, &run.file.f_level, d.f_level),
        min_leaf: pick(&a.min_leaf, &run.file.min_leaf, d.min_leaf),
    };
    let tree = learn(&table, mode, params)?;
    let mut out = Output::new(
        "tree-learn",
        run.seed,
        &inputs,
        json!({ "mode": mode, "learn": params, "roles": roles_json(&roles) }),
    );
    for f in &a.formats {
        match f {
            TreeFormat::Json => out.json("tree.json", &tree)?,
            TreeFormat::Text => out.text("tree.txt", &tree.to_text()),
            TreeFormat::Dot => out.dot("tree.dot", &tree.to_dot()),
        }
    }
    Ok(out)
}

fn roles_json(r: &ColumnRoles) -> serde_json::Value {
    json!({ "id": r.id, "targets": r.targets, "descriptive": r.descriptive, "ignore": r.ignore })
}

pub fn tree_predict(run: &Run, a: &TreePredictArgs) -> anyhow::Result<Output> {
    let inputs: Vec<(&str, &Path)> = vec![("tree", &a.tree), ("table", &a.table)];
    check_inputs(&inputs)?;
    let text = std::fs::read_to_string(&a.tree)?;
    let tree = Tree::from_json(&text)?;
    // target columns present in the table are skipped; clustering targets
    // are the descriptive columns themselves
    let ignore = if tree.mode == Mode::Clustering {
        vec![]
    } else {
        tree.targets.clone()
    };
    let roles = ColumnRoles {
        id: a.id.clone(),
        ignore,
        ..ColumnRoles::default()
    };
    let table = DataTable::load(&a.table, &roles, Mode::Clustering)?;
    let preds = tree.predict_all(&table)?;
    let mut csv = format!("id,leaf,{}\n", tree.targets.join(","));
    for (id, p) in table.ids().iter().zip(&preds) {
        let value = match &p.prototype {
            Prototype::Mean { values } => values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            Prototype::Class { label } => label.clone(),
        };
        let _ = writeln!(csv, "{id},{},{value}", p.leaf);
    }
    let mut out = Output::new("tree-predict", run.seed, &inputs, json!({ "id": a.id }));
    out.csv("predictions.csv", &csv);
    Ok(out)
}
