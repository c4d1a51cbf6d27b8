use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Mode;
use crate::data::{build_column, read_raw_columns, Column, TypeHint};
use crate::{Error, Result};

/// Target side of a [`DataTable`].
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    /// Clustering tables carry no explicit targets.
    None,
    /// Row-major numeric targets.
    Numeric { names: Vec<String>, values: Vec<Vec<f64>> },
    Class {
        name: String,
        classes: Vec<String>,
        codes: Vec<usize>,
    },
}

/// Rows with descriptive columns and (optionally) target columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    ids: Vec<String>,
    descriptive: Vec<Column>,
    targets: Targets,
}

/// Which CSV columns play which part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnRoles {
    /// Column holding row identifiers; row positions are used without one.
    pub id: Option<String>,
    pub targets: Vec<String>,
    /// Descriptive columns; all remaining columns when `None`.
    pub descriptive: Option<Vec<String>>,
    pub ignore: Vec<String>,
}

impl ColumnRoles {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// (names, row-major values, per-column (mean, std)).
pub(crate) type Standardized = (Vec<String>, Vec<Vec<f64>>, Vec<(f64, f64)>);

impl DataTable {
    pub fn new(ids: Vec<String>, descriptive: Vec<Column>, targets: Targets) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Contract("table has no rows".into()));
        }
        if descriptive.is_empty() {
            return Err(Error::Contract("table needs at least one descriptive column".into()));
        }
        for c in &descriptive {
            if c.values.len() != n {
                return Err(Error::Schema(format!(
                    "column '{}' has {} rows, expected {n}",
                    c.name,
                    c.values.len()
                )));
            }
            if let Some(i) = c.values.iter().position(Option::is_none) {
                return Err(Error::Contract(format!(
                    "descriptive column '{}' is missing a value at row {i}",
                    c.name
                )));
            }
            c.validate()?;
        }
        match &targets {
            Targets::None => {}
            Targets::Numeric { names, values } => {
                if names.is_empty() {
                    return Err(Error::Contract("numeric targets need at least one column".into()));
                }
                if values.len() != n || values.iter().any(|r| r.len() != names.len()) {
                    return Err(Error::Schema("target matrix shape does not match the table".into()));
                }
                if values.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::Contract("target values must be finite".into()));
                }
            }
            Targets::Class { classes, codes, .. } => {
                if codes.len() != n {
                    return Err(Error::Schema("class column length does not match the table".into()));
                }
                if codes.iter().any(|&c| c >= classes.len()) {
                    return Err(Error::Schema("class code outside the class list".into()));
                }
            }
        }
        Ok(DataTable {
            ids,
            descriptive,
            targets,
        })
    }

    /// Parses a CSV table. Classification reads its single target as
    /// nominal; regression needs numeric targets; clustering takes none.
    pub fn from_csv_str(text: &str, roles: &ColumnRoles, mode: Mode) -> Result<Self> {
        let (header, raw) = read_raw_columns(text)?;
        let position = |name: &str| {
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema(format!("column '{name}' not found")))
        };
        let n = raw.first().map_or(0, Vec::len);
        let ids = match &roles.id {
            Some(c) => raw[position(c)?].clone(),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let mut used: BTreeSet<&str> = roles.ignore.iter().map(String::as_str).collect();
        used.extend(roles.id.as_deref());
        used.extend(roles.targets.iter().map(String::as_str));

        let targets = match mode {
            Mode::Clustering => {
                if !roles.targets.is_empty() {
                    return Err(Error::Contract("clustering mode takes no target columns".into()));
                }
                Targets::None
            }
            Mode::Classification => {
                let [name] = roles.targets.as_slice() else {
                    return Err(Error::Contract("classification needs exactly one target column".into()));
                };
                let col = &raw[position(name)?];
                if col.iter().any(|v| v == "?") {
                    return Err(Error::Contract(format!("target '{name}' has missing values")));
                }
                let classes: Vec<String> = col.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
                let codes = col
                    .iter()
                    .map(|v| classes.iter().position(|c| c == v).unwrap())
                    .collect();
                Targets::Class {
                    name: name.clone(),
                    classes,
                    codes,
                }
            }
            Mode::Regression => {
                if roles.targets.is_empty() {
                    return Err(Error::Contract("regression needs at least one target column".into()));
                }
                let cols = roles
                    .targets
                    .iter()
                    .map(|name| {
                        let col = build_column(name, &raw[position(name)?], Some(TypeHint::Numeric))?;
                        col.values
                            .into_iter()
                            .map(|v| v.ok_or_else(|| Error::Contract(format!("target '{name}' has missing values"))))
                            .collect::<Result<Vec<f64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                let values = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                Targets::Numeric {
                    names: roles.targets.clone(),
                    values,
                }
            }
        };

        let names: Vec<&str> = match &roles.descriptive {
            Some(d) => d.iter().map(String::as_str).collect(),
            None => header
                .iter()
                .map(String::as_str)
                .filter(|h| !used.contains(h))
                .collect(),
        };
        let descriptive = names
            .iter()
            .map(|name| build_column(name, &raw[position(name)?], None))
            .collect::<Result<Vec<_>>>()?;
        DataTable::new(ids, descriptive, targets)
    }

    pub fn load(path: impl AsRef<Path>, roles: &ColumnRoles, mode: Mode) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text, roles, mode)
    }

    pub fn n_rows(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn descriptive(&self) -> &[Column] {
        &self.descriptive
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.descriptive.iter().find(|c| c.name == name)
    }

    /// Copy with one numeric target column multiplied by `factor`.
    pub fn scale_target(&self, target: usize, factor: f64) -> Result<Self> {
        let Targets::Numeric { names, values } = &self.targets else {
            return Err(Error::Contract("only numeric targets can be rescaled".into()));
        };
        if target >= names.len() {
            return Err(Error::Contract(format!("no target {target}")));
        }
        let mut values = values.clone();
        for r in &mut values {
            r[target] *= factor;
        }
        DataTable::new(
            self.ids.clone(),
            self.descriptive.clone(),
            Targets::Numeric {
                names: names.clone(),
                values,
            },
        )
    }

    /// Standardized numeric descriptive columns used as clustering targets;
    /// zero-variance columns are left out.
    pub(crate) fn standardized_descriptive(&self) -> Standardized {
        let mut names = vec![];
        let mut cols = vec![];
        let mut params = vec![];
        for c in &self.descriptive {
            if !c.kind.is_numeric() {
                continue;
            }
            let xs: Vec<f64> = c
                .values
                .iter()
                .map(|v| v.expect("no missing descriptive values"))
                .collect();
            let m = crate::stats::mean(&xs);
            let sd = crate::stats::std_dev(&xs);
            if sd == 0.0 {
                continue;
            }
            names.push(c.name.clone());
            cols.push(xs.iter().map(|x| (x - m) / sd).collect::<Vec<_>>());
            params.push((m, sd));
        }
        let values = (0..self.n_rows())
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        (names, values, params)
    }
}
