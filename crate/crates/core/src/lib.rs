//! Meta-analysis toolkit for multi-label classification: dataset parsing,
//! meta-feature extraction, evaluation measures, iterative stratification,
//! predictive clustering trees and the meta-learning scenarios built on them.

pub mod data;
pub mod error;
pub mod eval;
pub mod features;
pub mod pct;
pub mod pipeline;
pub mod stats;
pub mod stratify;

pub use error::{Error, Result};
