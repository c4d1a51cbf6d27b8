//! ARFF (dense and sparse) reader with MULAN-style label selection.

use std::path::Path;

use super::{Column, ColumnKind, LabelMatrix, MlcDataset, Role};
use crate::error::{Error, Result};

/// Which ARFF attributes are labels.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelSpec {
    /// The last `k` attributes.
    LastK(usize),
    /// Attributes with these names (as listed in a MULAN XML file).
    Names(Vec<String>),
}

impl LabelSpec {
    /// Interprets a command-line style spec: an integer count or a path to
    /// a MULAN XML label file.
    pub fn from_arg(arg: &str) -> Result<Self> {
        if let Ok(k) = arg.trim().parse::<usize>() {
            return Ok(LabelSpec::LastK(k));
        }
        let text = std::fs::read_to_string(arg).map_err(|e| Error::io(arg, e))?;
        Ok(LabelSpec::Names(parse_mulan_xml(&text)?))
    }
}

/// Label names from a MULAN XML label file, in document order. Nested
/// (hierarchical) label elements are flattened.
pub fn parse_mulan_xml(text: &str) -> Result<Vec<String>> {
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| Error::parse(e.pos().row as usize, format!("invalid label XML: {e}")))?;
    let names: Vec<String> = doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "label")
        .filter_map(|n| n.attribute("name").map(str::to_string))
        .collect();
    if names.is_empty() {
        return Err(Error::Schema("label XML lists no labels".into()));
    }
    Ok(names)
}

#[derive(Debug)]
enum AttrType {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug)]
struct Attribute {
    name: String,
    kind: AttrType,
}

/// Reads an ARFF file and splits its attributes into features and labels.
pub fn parse_mulan(path: impl AsRef<Path>, spec: &LabelSpec) -> Result<MlcDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_arff_str(&text, spec, &stem)
}

/// Same as [`parse_mulan`] over in-memory text. `fallback_name` is used when
/// the file has no `@relation` line.
pub fn parse_arff_str(text: &str, spec: &LabelSpec, fallback_name: &str) -> Result<MlcDataset> {
    let mut relation: Option<String> = None;
    let mut attrs: Vec<Attribute> = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut data_line = None;

    for (no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            let rest = line[9..].trim();
            let (name, _) = take_token(rest, no)?;
            relation = Some(name);
        } else if lower.starts_with("@attribute") {
            attrs.push(parse_attribute(line[10..].trim(), no)?);
        } else if lower.starts_with("@data") {
            data_line = Some(no);
            break;
        } else {
            return Err(Error::parse(no, format!("unexpected header line '{line}'")));
        }
    }
    let data_start = data_line.ok_or_else(|| Error::parse(text.lines().count(), "missing @data section"))?;
    if attrs.is_empty() {
        return Err(Error::parse(data_start, "no @attribute declarations"));
    }

    let label_idx = resolve_labels(&attrs, spec)?;
    let mut is_label = vec![false; attrs.len()];
    for &i in &label_idx {
        is_label[i] = true;
    }

    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); attrs.len()];
    let mut label_rows: Vec<Vec<u32>> = Vec::new();
    let mut label_pos = vec![usize::MAX; attrs.len()];
    for (p, &i) in label_idx.iter().enumerate() {
        label_pos[i] = p;
    }

    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let values = if line.starts_with('{') {
            parse_sparse_row(line, &attrs, no)?
        } else {
            parse_dense_row(line, &attrs, no)?
        };
        let mut row_labels = Vec::new();
        for (a, v) in values.into_iter().enumerate() {
            if is_label[a] {
                match label_value(&attrs[a], v) {
                    Some(true) => row_labels.push(label_pos[a] as u32),
                    Some(false) => {}
                    None => {
                        return Err(Error::Schema(format!(
                            "line {no}: label attribute '{}' is not binary or is missing",
                            attrs[a].name
                        )))
                    }
                }
            } else {
                columns[a].push(v);
            }
        }
        label_rows.push(row_labels);
    }
    if label_rows.is_empty() {
        return Err(Error::parse(data_start, "no instances in @data section"));
    }

    let mut features = Vec::new();
    let mut label_names = vec![String::new(); label_idx.len()];
    for (a, (attr, values)) in attrs.into_iter().zip(columns).enumerate() {
        if is_label[a] {
            label_names[label_pos[a]] = attr.name;
            continue;
        }
        let kind = match attr.kind {
            AttrType::Numeric => ColumnKind::Numeric,
            AttrType::Nominal(categories) => ColumnKind::Nominal { categories },
        };
        features.push(Column {
            name: attr.name,
            kind,
            values,
        });
    }
    let n_labels = label_names.len();
    MlcDataset::new(
        relation.unwrap_or_else(|| fallback_name.to_string()),
        Role::Full,
        features,
        LabelMatrix::new(n_labels, label_rows)?,
        label_names,
    )
}

fn resolve_labels(attrs: &[Attribute], spec: &LabelSpec) -> Result<Vec<usize>> {
    match spec {
        LabelSpec::LastK(k) => {
            if *k >= attrs.len() {
                return Err(Error::Schema(format!(
                    "{k} label attributes requested but only {} attributes declared (need at least one feature)",
                    attrs.len()
                )));
            }
            Ok((attrs.len() - k..attrs.len()).collect())
        }
        LabelSpec::Names(names) => {
            let mut missing = Vec::new();
            let mut idx = Vec::new();
            for n in names {
                match attrs.iter().position(|a| &a.name == n) {
                    Some(i) => idx.push(i),
                    None => missing.push(n.clone()),
                }
            }
            if !missing.is_empty() {
                return Err(Error::Schema(format!(
                    "labels not declared in the ARFF header: {}",
                    missing.join(", ")
                )));
            }
            Ok(idx)
        }
    }
}

/// `Some(true)` for a relevant label, `Some(false)` for irrelevant,
/// `None` when the value is not binary.
fn label_value(attr: &Attribute, v: Option<f64>) -> Option<bool> {
    let v = v?;
    match &attr.kind {
        AttrType::Numeric => {
            if v == 1.0 {
                Some(true)
            } else if v == 0.0 {
                Some(false)
            } else {
                None
            }
        }
        AttrType::Nominal(cats) => match cats[v as usize].as_str() {
            "1" => Some(true),
            "0" => Some(false),
            _ => None,
        },
    }
}

fn parse_attribute(rest: &str, no: usize) -> Result<Attribute> {
    let (name, rest) = take_token(rest, no)?;
    let rest = rest.trim();
    if rest.starts_with('{') {
        let close = rest
            .rfind('}')
            .ok_or_else(|| Error::parse(no, "unterminated nominal specification"))?;
        let cats = split_values(&rest[1..close], no)?
            .into_iter()
            .map(|c| c.trim().to_string())
            .collect::<Vec<_>>();
        if cats.is_empty() {
            return Err(Error::parse(
                no,
                format!("nominal attribute '{name}' has no categories"),
            ));
        }
        return Ok(Attribute {
            name,
            kind: AttrType::Nominal(cats),
        });
    }
    let ty = rest
        .split_whitespace()
        .next()
        .ok_or_else(|| Error::parse(no, format!("attribute '{name}' has no type")))?
        .to_ascii_lowercase();
    match ty.as_str() {
        "numeric" | "real" | "integer" => Ok(Attribute {
            name,
            kind: AttrType::Numeric,
        }),
        "string" | "date" | "relational" => Err(Error::Schema(format!(
            "line {no}: attribute '{name}' has unsupported type '{ty}'"
        ))),
        other => Err(Error::parse(no, format!("unknown attribute type '{other}'"))),
    }
}

/// Splits off one (possibly quoted) token, returning it and the remainder.
fn take_token(s: &str, no: usize) -> Result<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err(Error::parse(no, "expected a name")),
        Some((_, q)) if q == '\'' || q == '"' => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err(Error::parse(no, "unterminated quoted name"))
        }
        Some(_) => {
            let end = s.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

/// Comma-separated values honouring single/double quotes.
fn split_values(s: &str, no: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    let mut was_quoted = false;
    for c in s.chars() {
        if escaped {
            cur.push(c);
            escaped = false;
            continue;
        }
        match quote {
            Some(q) => {
                if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                } else {
                    cur.push(c);
                }
            }
            None => match c {
                '\'' | '"' => {
                    quote = Some(c);
                    was_quoted = true;
                }
                ',' => {
                    out.push(finish(&cur, was_quoted));
                    cur.clear();
                    was_quoted = false;
                }
                _ => cur.push(c),
            },
        }
    }
    if quote.is_some() {
        return Err(Error::parse(no, "unterminated quote"));
    }
    if !cur.trim().is_empty() || was_quoted || !out.is_empty() {
        out.push(finish(&cur, was_quoted));
    }
    Ok(out)
}

fn finish(cur: &str, quoted: bool) -> String {
    if quoted {
        cur.to_string()
    } else {
        cur.trim().to_string()
    }
}

fn parse_value(attr: &Attribute, raw: &str, no: usize) -> Result<Option<f64>> {
    let raw = raw.trim();
    if raw == "?" {
        return Ok(None);
    }
    match &attr.kind {
        AttrType::Numeric => raw
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Error::parse(no, format!("'{raw}' is not a number (attribute '{}')", attr.name))),
        AttrType::Nominal(cats) => cats
            .iter()
            .position(|c| c == raw)
            .map(|i| Some(i as f64))
            .ok_or_else(|| Error::parse(no, format!("'{raw}' is not a declared category of '{}'", attr.name))),
    }
}

fn parse_dense_row(line: &str, attrs: &[Attribute], no: usize) -> Result<Vec<Option<f64>>> {
    let raw = split_values(line, no)?;
    if raw.len() != attrs.len() {
        return Err(Error::parse(
            no,
            format!("expected {} values, found {}", attrs.len(), raw.len()),
        ));
    }
    raw.iter().zip(attrs).map(|(r, a)| parse_value(a, r, no)).collect()
}

fn parse_sparse_row(line: &str, attrs: &[Attribute], no: usize) -> Result<Vec<Option<f64>>> {
    let close = line
        .rfind('}')
        .ok_or_else(|| Error::parse(no, "unterminated sparse instance"))?;
    // omitted entries take the zero value (first category for nominal attributes)
    let mut values = vec![Some(0.0); attrs.len()];
    for entry in split_values(&line[1..close], no)? {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (idx, val) = entry
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(no, format!("sparse entry '{entry}' lacks a value")))?;
        let idx: usize = idx
            .parse()
            .map_err(|_| Error::parse(no, format!("bad sparse index '{idx}'")))?;
        let attr = attrs
            .get(idx)
            .ok_or_else(|| Error::parse(no, format!("sparse index {idx} out of range")))?;
        values[idx] = parse_value(attr, val, no)?;
    }
    Ok(values)
}
