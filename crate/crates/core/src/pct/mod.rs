//! Predictive clustering trees: top-down induction of binary trees whose
//! heuristic is variance reduction (clustering, multi-target regression)
//! or information gain (classification), with F-test stopping.

mod export;
mod ftest;
mod split;
mod table;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ftest::{f_statistic, ftest_accept};
pub use split::{best_split, Split, Test};
pub use table::{ColumnRoles, DataTable, Targets};
pub use tree::{learn, ColumnSchema, LearnParams, Node, NodeStats, Prediction, Prototype, Tree, TREE_FORMAT};

/// Candidate F-test levels used when tuning.
pub const F_LEVELS: [f64; 5] = [0.001, 0.01, 0.05, 0.1, 0.125];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Clustering,
    Classification,
    Regression,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Clustering => "clustering",
            Mode::Classification => "classification",
            Mode::Regression => "regression",
        })
    }
}

impl FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "clustering" => Ok(Mode::Clustering),
            "classification" => Ok(Mode::Classification),
            "regression" => Ok(Mode::Regression),
            _ => Err(crate::Error::Contract(format!("unknown tree mode '{s}'"))),
        }
    }
}
