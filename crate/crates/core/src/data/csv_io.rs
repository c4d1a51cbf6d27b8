//! CSV reader/writer for multi-label datasets (header row, `?` as missing).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{Column, ColumnKind, LabelMatrix, MlcDataset, Role};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeHint {
    Numeric,
    Nominal,
}

pub fn parse_csv(
    path: impl AsRef<Path>,
    label_columns: &[String],
    type_hints: &BTreeMap<String, TypeHint>,
) -> Result<MlcDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv_str(&text, &name, label_columns, type_hints)
}

pub fn parse_csv_str(
    text: &str,
    name: &str,
    label_columns: &[String],
    type_hints: &BTreeMap<String, TypeHint>,
) -> Result<MlcDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let mut seen = BTreeSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(Error::Schema(format!("duplicate column '{h}'")));
        }
    }
    let missing: Vec<&str> = label_columns
        .iter()
        .filter(|l| !header.contains(l))
        .map(|s| s.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Schema(format!(
            "label columns not found: {}",
            missing.join(", ")
        )));
    }

    let mut raw: Vec<Vec<String>> = vec![Vec::new(); header.len()];
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        if rec.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        for (c, v) in rec.iter().enumerate() {
            raw[c].push(v.trim().to_string());
        }
    }
    if raw[0].is_empty() {
        return Err(Error::parse(1, "no instances"));
    }
    let n = raw[0].len();

    let mut features = Vec::new();
    let mut label_dense = vec![vec![false; label_columns.len()]; n];
    for (c, name) in header.iter().enumerate() {
        if let Some(p) = label_columns.iter().position(|l| l == name) {
            for (i, v) in raw[c].iter().enumerate() {
                label_dense[i][p] = match v.as_str() {
                    "1" | "1.0" => true,
                    "0" | "0.0" => false,
                    other => {
                        return Err(Error::Schema(format!(
                            "label column '{name}' holds '{other}' (row {})",
                            i + 1
                        )))
                    }
                };
            }
            continue;
        }
        features.push(build_column(name, &raw[c], type_hints.get(name).copied())?);
    }
    MlcDataset::new(
        name,
        Role::Full,
        features,
        LabelMatrix::from_dense(&label_dense, label_columns.len())?,
        label_columns.to_vec(),
    )
}

pub(crate) fn build_column(name: &str, raw: &[String], hint: Option<TypeHint>) -> Result<Column> {
    let opt: Vec<Option<&str>> = raw
        .iter()
        .map(|v| if v == "?" { None } else { Some(v.as_str()) })
        .collect();
    let all_numeric = opt.iter().flatten().all(|v| v.parse::<f64>().is_ok_and(f64::is_finite));
    match hint {
        Some(TypeHint::Numeric) if !all_numeric => Err(Error::Schema(format!(
            "column '{name}' was declared numeric but holds non-numeric values"
        ))),
        Some(TypeHint::Nominal) => Ok(Column::nominal_from_strings(name, &opt)),
        Some(TypeHint::Numeric) | None if all_numeric => Ok(Column::numeric(
            name,
            opt.iter().map(|v| v.map(|s| s.parse().unwrap())).collect(),
        )),
        _ => Ok(Column::nominal_from_strings(name, &opt)),
    }
}

/// Header and column-major raw cells of a CSV table; `#` lines are
/// comments. Rejects duplicate headers and ragged rows.
pub(crate) fn read_raw_columns(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut seen = BTreeSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(Error::Schema(format!("duplicate column '{h}'")));
        }
    }
    let mut raw: Vec<Vec<String>> = vec![Vec::new(); header.len()];
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        for (col, v) in raw.iter_mut().zip(rec.iter()) {
            col.push(v.to_string());
        }
    }
    Ok((header, raw))
}

/// Writes features then labels (as 0/1) with a header row.
pub fn write_csv(ds: &MlcDataset) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = ds.feature_names();
    header.extend(ds.label_names().iter().map(|s| s.as_str()));
    w.write_record(&header)?;
    for i in 0..ds.n_instances() {
        let mut rec: Vec<String> = ds
            .features()
            .iter()
            .map(|f| f.display_value(i).unwrap_or_else(|| "?".into()))
            .collect();
        rec.extend((0..ds.n_labels()).map(|l| if ds.labels().contains(i, l) { "1" } else { "0" }.to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Type hints that reproduce the column tags of `ds` on re-parse.
pub fn type_hints(ds: &MlcDataset) -> BTreeMap<String, TypeHint> {
    ds.features()
        .iter()
        .map(|f| {
            let h = match f.kind {
                ColumnKind::Numeric => TypeHint::Numeric,
                ColumnKind::Nominal { .. } => TypeHint::Nominal,
            };
            (f.name.clone(), h)
        })
        .collect()
}
