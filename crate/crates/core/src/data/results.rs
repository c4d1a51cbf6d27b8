//! Experiment results: (dataset, method, measure) scores and success logs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Registry;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub dataset: String,
    pub method: String,
    pub measure: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultsTable {
    scores: BTreeMap<(String, String, String), f64>,
}

impl ResultsTable {
    pub fn from_rows(rows: Vec<ScoreRow>, registry: &Registry) -> Result<Self> {
        let mut scores = BTreeMap::new();
        for r in rows {
            if !r.score.is_finite() {
                return Err(Error::Schema(format!(
                    "non-finite score for ({}, {}, {})",
                    r.dataset, r.method, r.measure
                )));
            }
            if registry.measure(&r.measure).is_some_and(|m| m.rate) && !(0.0..=1.0).contains(&r.score) {
                return Err(Error::Schema(format!(
                    "score {} of rate measure '{}' outside [0,1] for ({}, {})",
                    r.score, r.measure, r.dataset, r.method
                )));
            }
            let key = (r.dataset, r.method, r.measure);
            if scores.insert(key.clone(), r.score).is_some() {
                return Err(Error::Schema(format!(
                    "duplicate result for ({}, {}, {})",
                    key.0, key.1, key.2
                )));
            }
        }
        Ok(ResultsTable { scores })
    }

    pub fn load(path: impl AsRef<Path>, registry: &Registry) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, registry)
    }

    pub fn parse(text: &str, registry: &Registry) -> Result<Self> {
        let rows = read_records::<ScoreRow>(text)?;
        Self::from_rows(rows, registry)
    }

    pub fn score(&self, dataset: &str, method: &str, measure: &str) -> Option<f64> {
        self.scores
            .get(&(dataset.to_string(), method.to_string(), measure.to_string()))
            .copied()
    }

    pub fn datasets(&self) -> BTreeSet<&str> {
        self.scores.keys().map(|k| k.0.as_str()).collect()
    }

    pub fn methods(&self) -> BTreeSet<&str> {
        self.scores.keys().map(|k| k.1.as_str()).collect()
    }

    /// Methods that have at least one score for `measure`.
    pub fn methods_for(&self, measure: &str) -> BTreeSet<&str> {
        self.scores
            .keys()
            .filter(|k| k.2 == measure)
            .map(|k| k.1.as_str())
            .collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = ScoreRow> + '_ {
        self.scores.iter().map(|((d, m, s), &score)| ScoreRow {
            dataset: d.clone(),
            method: m.clone(),
            measure: s.clone(),
            score,
        })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessRow {
    pub dataset: String,
    pub method: String,
    pub attempted: u64,
    pub finished: u64,
}

/// How many candidate experiments were attempted/finished per cell.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SuccessLog {
    rows: Vec<SuccessRow>,
}

impl SuccessLog {
    pub fn from_rows(rows: Vec<SuccessRow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rows {
            if r.finished > r.attempted {
                return Err(Error::Schema(format!(
                    "({}, {}) finished {} of {} attempted",
                    r.dataset, r.method, r.finished, r.attempted
                )));
            }
            if !seen.insert((r.dataset.as_str(), r.method.as_str())) {
                return Err(Error::Schema(format!(
                    "duplicate success entry for ({}, {})",
                    r.dataset, r.method
                )));
            }
        }
        Ok(SuccessLog { rows })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rows(read_records(text)?)
    }

    pub fn rows(&self) -> &[SuccessRow] {
        &self.rows
    }
}

/// Deserializes CSV records, skipping `#` comment lines.
pub(crate) fn read_records<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        match rec {
            Ok(r) => out.push(r),
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                return Err(Error::parse(line, e.to_string()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let text = "# provenance line\ndataset,method,measure,score\nd1,BR,hamming_loss,0.1\nd1,LP,hamming_loss,0.2\n";
        let t = ResultsTable::parse(text, &Registry::default()).unwrap();
        assert_eq!(t.score("d1", "LP", "hamming_loss"), Some(0.2));
        assert_eq!(t.score("d1", "LP", "F1.macro"), None);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn duplicate_keys_rejected() {
        let text = "dataset,method,measure,score\nd,m,F1.micro,0.1\nd,m,F1.micro,0.3\n";
        assert!(matches!(
            ResultsTable::parse(text, &Registry::default()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn rate_range_enforced_only_for_rates() {
        let reg = Registry::default();
        assert!(ResultsTable::parse("dataset,method,measure,score\nd,m,F1.micro,1.5\n", &reg).is_err());
        assert!(ResultsTable::parse("dataset,method,measure,score\nd,m,training_time,15\n", &reg).is_ok());
    }

    #[test]
    fn success_log_checks() {
        assert!(SuccessLog::parse("dataset,method,attempted,finished\nd,m,3,4\n").is_err());
        let log = SuccessLog::parse("dataset,method,attempted,finished\nd,m,4,3\n").unwrap();
        assert_eq!(log.rows()[0].finished, 3);
    }
}
