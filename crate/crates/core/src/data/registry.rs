use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_REGISTRY: &str = include_str!("../../fixtures/registry.txt");

/// Method family of the multi-label taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "AA")]
    Aa,
    #[serde(rename = "PT.BR")]
    PtBr,
    #[serde(rename = "PT.LP")]
    PtLp,
    #[serde(rename = "OTHER")]
    Other,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Aa, Family::PtBr, Family::PtLp, Family::Other];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Aa => "AA",
            Family::PtBr => "PT.BR",
            Family::PtLp => "PT.LP",
            Family::Other => "OTHER",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "AA" => Ok(Family::Aa),
            "PT.BR" => Ok(Family::PtBr),
            "PT.LP" => Ok(Family::PtLp),
            "OTHER" => Ok(Family::Other),
            other => Err(Error::Schema(format!("unknown method family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Higher,
    Lower,
}

impl Orientation {
    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Higher => a > b,
            Orientation::Lower => a < b,
        }
    }

    /// +1 for higher-is-better, -1 otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Higher => 1.0,
            Orientation::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureInfo {
    pub orientation: Orientation,
    pub rate: bool,
}

/// Method families, measure orientations and the reliable-defaults group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    families: BTreeMap<String, Family>,
    measures: BTreeMap<String, MeasureInfo>,
    reliable_defaults: BTreeSet<String>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::parse(DEFAULT_REGISTRY).expect("bundled registry parses")
    }
}

impl Registry {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Registry::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reg = Registry {
            families: BTreeMap::new(),
            measures: BTreeMap::new(),
            reliable_defaults: BTreeSet::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(no, format!("expected 'key = value', got '{line}'")))?;
            let mut key_parts = key.split_whitespace();
            let head = key_parts.next().unwrap_or("");
            let name = key_parts.next();
            if key_parts.next().is_some() {
                return Err(Error::parse(no, format!("malformed key '{}'", key.trim())));
            }
            match (head, name) {
                ("family", Some(m)) => {
                    let fam = value.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
                    reg.families.insert(m.to_string(), fam);
                }
                ("measure", Some(m)) => {
                    let mut words = value.split_whitespace();
                    let orientation = match words.next() {
                        Some("higher") => Orientation::Higher,
                        Some("lower") => Orientation::Lower,
                        other => {
                            return Err(Error::parse(
                                no,
                                format!("orientation must be 'higher' or 'lower', got {other:?}"),
                            ))
                        }
                    };
                    let rate = match words.next() {
                        None => false,
                        Some("rate") => true,
                        Some(w) => return Err(Error::parse(no, format!("unexpected '{w}'"))),
                    };
                    reg.measures.insert(m.to_string(), MeasureInfo { orientation, rate });
                }
                ("reliable-defaults", None) => {
                    reg.reliable_defaults = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                }
                _ => return Err(Error::parse(no, format!("unknown key '{}'", key.trim()))),
            }
        }
        Ok(reg)
    }

    /// Renders the registry back into its text grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, f) in &self.families {
            out.push_str(&format!("family {m} = {f}\n"));
        }
        for (m, info) in &self.measures {
            let o = match info.orientation {
                Orientation::Higher => "higher",
                Orientation::Lower => "lower",
            };
            let rate = if info.rate { " rate" } else { "" };
            out.push_str(&format!("measure {m} = {o}{rate}\n"));
        }
        let defaults: Vec<&str> = self.reliable_defaults.iter().map(|s| s.as_str()).collect();
        out.push_str(&format!("reliable-defaults = {}\n", defaults.join(", ")));
        out
    }

    pub fn family(&self, method: &str) -> Family {
        self.families.get(method).copied().unwrap_or(Family::Other)
    }

    pub fn measure(&self, name: &str) -> Option<MeasureInfo> {
        self.measures.get(name).copied()
    }

    pub fn orientation(&self, measure: &str) -> Result<Orientation> {
        self.measure(measure)
            .map(|m| m.orientation)
            .ok_or_else(|| Error::Contract(format!("orientation of measure '{measure}' is not registered")))
    }

    pub fn is_reliable_default(&self, method: &str) -> bool {
        self.reliable_defaults.contains(method)
    }

    pub fn reliable_defaults(&self) -> &BTreeSet<String> {
        &self.reliable_defaults
    }

    pub fn set_family(&mut self, method: impl Into<String>, family: Family) {
        self.families.insert(method.into(), family);
    }

    pub fn set_measure(&mut self, name: impl Into<String>, orientation: Orientation, rate: bool) {
        self.measures.insert(name.into(), MeasureInfo { orientation, rate });
    }

    pub fn set_reliable_defaults<I, S>(&mut self, methods: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.reliable_defaults = methods.into_iter().map(Into::into).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let r = Registry::default();
        assert_eq!(r.orientation("hamming_loss").unwrap(), Orientation::Lower);
        assert_eq!(r.orientation("F1.macro").unwrap(), Orientation::Higher);
        assert_eq!(r.family("RFPCT"), Family::Aa);
        assert_eq!(r.family("RAkEL"), Family::PtLp);
        assert_eq!(r.family("never-heard-of-it"), Family::Other);
        assert!(r.is_reliable_default("AdaBoost"));
        assert!(!r.is_reliable_default("HOMER"));
        assert_eq!(r.reliable_defaults().len(), 7);
    }

    #[test]
    fn text_round_trip() {
        let r = Registry::default();
        assert_eq!(Registry::parse(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(
            Registry::parse("family X = ZZ"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Registry::parse("# ok\nmeasure m = sideways"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(Registry::parse("nonsense").is_err());
    }
}
