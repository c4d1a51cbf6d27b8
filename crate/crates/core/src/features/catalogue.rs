use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_CATALOGUE: &str = include_str!("../../fixtures/catalogue_v1.txt");

/// The seven leaf groups of the meta-feature taxonomy.
pub const GROUPS: [&str; 7] = ["D", "A.SF", "A.IT", "L.DL.G", "L.DL.I.A", "L.DL.I.E", "L.RL"];

/// Closed/open interval with optional infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl ValueRange {
    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_closed { v >= self.lo } else { v > self.lo };
        let below = if self.hi_closed { v <= self.hi } else { v < self.hi };
        above && below
    }
}

impl FromStr for ValueRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Schema(format!("malformed range '{s}'"));
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let (a, b) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
        let bound = |t: &str| -> Result<f64> {
            match t.trim() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                x => x.parse().map_err(|_| bad()),
            }
        };
        Ok(ValueRange {
            lo: bound(a)?,
            lo_closed,
            hi: bound(b)?,
            hi_closed,
        })
    }
}

/// How a feature responds when every example of the dataset is duplicated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duplication {
    Same,
    Double,
    Half,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub id: String,
    pub group: String,
    pub name: String,
    pub range: ValueRange,
    pub duplication: Duplication,
    pub pinned: bool,
}

/// Tunable parameters of the relationship features.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureParams {
    pub dependence_alpha: f64,
    pub small_set_threshold: usize,
}

impl Default for FeatureParams {
    fn default() -> Self {
        FeatureParams {
            dependence_alpha: 0.01,
            small_set_threshold: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalogue {
    pub version: String,
    pub params: FeatureParams,
    pub entries: Vec<CatalogueEntry>,
}

impl Default for Catalogue {
    fn default() -> Self {
        Catalogue::parse(DEFAULT_CATALOGUE).expect("bundled catalogue parses")
    }
}

impl Catalogue {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Catalogue::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut params = FeatureParams::default();
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.contains('|') {
                let cells: Vec<&str> = line.split('|').map(str::trim).collect();
                if cells.len() != 6 {
                    return Err(Error::parse(no, format!("expected 6 fields, found {}", cells.len())));
                }
                let duplication = match cells[4] {
                    "same" => Duplication::Same,
                    "double" => Duplication::Double,
                    "half" => Duplication::Half,
                    "other" => Duplication::Other,
                    x => return Err(Error::parse(no, format!("unknown duplication rule '{x}'"))),
                };
                let pinned = match cells[5] {
                    "pinned" => true,
                    "standard" => false,
                    x => return Err(Error::parse(no, format!("unknown status '{x}'"))),
                };
                if !GROUPS.contains(&cells[1]) {
                    return Err(Error::parse(no, format!("unknown group '{}'", cells[1])));
                }
                entries.push(CatalogueEntry {
                    id: cells[0].to_string(),
                    group: cells[1].to_string(),
                    name: cells[2].to_string(),
                    range: cells[3].parse().map_err(|e: Error| Error::parse(no, e.to_string()))?,
                    duplication,
                    pinned,
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no, format!("unrecognised line '{line}'")))?;
            let value = value.trim();
            match key.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["version"] => version = Some(value.to_string()),
                ["param", "dependence_alpha"] => {
                    params.dependence_alpha = value
                        .parse()
                        .map_err(|_| Error::parse(no, "dependence_alpha must be a number"))?
                }
                ["param", "small_set_threshold"] => {
                    params.small_set_threshold = value
                        .parse()
                        .map_err(|_| Error::parse(no, "small_set_threshold must be a count"))?
                }
                _ => return Err(Error::parse(no, format!("unknown key '{}'", key.trim()))),
            }
        }
        let cat = Catalogue {
            version: version.ok_or_else(|| Error::Schema("catalogue lacks a version line".into()))?,
            params,
            entries,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for e in &self.entries {
            if !ids.insert(e.id.as_str()) {
                return Err(Error::Schema(format!("duplicate catalogue id '{}'", e.id)));
            }
        }
        for g in GROUPS {
            if !self.entries.iter().any(|e| e.group == g) {
                return Err(Error::Schema(format!("catalogue group '{g}' is empty")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.id.as_str())
    }

    pub fn entry(&self, id: &str) -> Option<&CatalogueEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}
