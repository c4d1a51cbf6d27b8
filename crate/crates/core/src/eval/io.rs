use std::path::Path;

use ndarray::Array2;
use serde::Deserialize;

use super::PredictionSet;
use crate::{Error, Result};

/// Reads a prediction file, choosing the format by extension (`.json`,
/// anything else is CSV).
pub fn read_predictions(path: impl AsRef<Path>) -> Result<PredictionSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_predictions_json(&text)
    } else {
        parse_predictions_csv(&text)
    }
}

fn binary(v: &str, line: usize) -> Result<bool> {
    match v {
        "0" | "0.0" => Ok(false),
        "1" | "1.0" => Ok(true),
        _ => Err(Error::parse(line, format!("expected 0 or 1, found '{v}'"))),
    }
}

/// CSV with `truth_<label>` columns, plus `score_<label>` and/or
/// `pred_<label>` columns for the same labels.
pub fn parse_predictions_csv(text: &str) -> Result<PredictionSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let labels: Vec<&str> = headers.iter().filter_map(|h| h.strip_prefix("truth_")).collect();
    if labels.is_empty() {
        return Err(Error::Schema("no truth_ columns".into()));
    }
    let find = |prefix: &str| -> Result<Option<Vec<usize>>> {
        let idx: Vec<Option<usize>> = labels
            .iter()
            .map(|l| headers.iter().position(|h| h == format!("{prefix}{l}")))
            .collect();
        if idx.iter().all(Option::is_none) {
            return Ok(None);
        }
        idx.iter()
            .zip(&labels)
            .map(|(i, l)| i.ok_or_else(|| Error::Schema(format!("missing column {prefix}{l}"))))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    };
    let truth_idx = find("truth_")?.expect("truth columns");
    let score_idx = find("score_")?;
    let pred_idx = find("pred_")?;

    let l = labels.len();
    let (mut truth, mut scores, mut preds) = (vec![], vec![], vec![]);
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for &i in &truth_idx {
            truth.push(binary(&rec[i], line)?);
        }
        if let Some(idx) = &score_idx {
            for &i in idx {
                let v: f64 = rec[i]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad score '{}'", &rec[i])))?;
                scores.push(v);
            }
        }
        if let Some(idx) = &pred_idx {
            for &i in idx {
                preds.push(binary(&rec[i], line)?);
            }
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::Schema("prediction file has no rows".into()));
    }
    let shape = (n, l);
    PredictionSet::new(
        Array2::from_shape_vec(shape, truth).expect("row-major truth"),
        score_idx.map(|_| Array2::from_shape_vec(shape, scores).expect("row-major scores")),
        pred_idx.map(|_| Array2::from_shape_vec(shape, preds).expect("row-major predictions")),
    )
}

#[derive(Deserialize)]
struct PredictionJson {
    truth: Vec<Vec<u8>>,
    #[serde(default)]
    scores: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    bipartition: Option<Vec<Vec<u8>>>,
}

fn to_array<T: Clone>(rows: Vec<Vec<T>>, what: &str) -> Result<Array2<T>> {
    let n = rows.len();
    let l = rows.first().map_or(0, Vec::len);
    if n == 0 || l == 0 {
        return Err(Error::Schema(format!("{what} matrix is empty")));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != l) {
        return Err(Error::Schema(format!(
            "{what} row {i} has {} entries, expected {l}",
            rows[i].len()
        )));
    }
    Ok(Array2::from_shape_vec((n, l), rows.concat()).expect("rectangular rows"))
}

fn to_bool(m: Array2<u8>, what: &str) -> Result<Array2<bool>> {
    if let Some(v) = m.iter().find(|v| **v > 1) {
        return Err(Error::Schema(format!("{what} entry {v} is not 0 or 1")));
    }
    Ok(m.mapv(|v| v == 1))
}

/// JSON object with `truth` and optional `scores` / `bipartition`
/// row-major matrices.
pub fn parse_predictions_json(text: &str) -> Result<PredictionSet> {
    let raw: PredictionJson = serde_json::from_str(text)?;
    let truth = to_bool(to_array(raw.truth, "truth")?, "truth")?;
    let scores = raw.scores.map(|s| to_array(s, "scores")).transpose()?;
    let bip = raw
        .bipartition
        .map(|b| to_array(b, "bipartition").and_then(|m| to_bool(m, "bipartition")))
        .transpose()?;
    PredictionSet::new(truth, scores, bip)
}
