//! Meta-learning scenarios over meta-feature matrices and results tables:
//! performance prediction, best-method selection, the performance
//! landscape, tuning analyses and experiment success rates.

mod landscape;
mod loo;
mod meta;
mod rsed;
mod tuning;

pub use landscape::{landscape, top_families, Landscape, LeafAnnotation, COUNT_RULE};
pub use loo::{loo_baseline, loo_evaluate, HeldOut, LooConfig, LooReport, LooScore};
pub use meta::{
    argbest, assemble, method_groups, ranked_methods, MetaDataset, MetaMatrix, MetaTarget, TargetKind, HYPER_TUNED,
    RELIABLE_DEFAULTS,
};
pub use rsed::{
    bin_index, improvement_histograms, relative_improvement, rsed, HistogramReport, Improvement, ImprovementFlag,
    MethodHistogram, RsedCell, RsedReport,
};
pub use tuning::{average_precision, difference_boxplot_data, tune_or_not, MeasureDifferences, Quartiles, TuneReport};
