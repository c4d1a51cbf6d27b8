//! Subcommand arguments and implementations. Each implementation returns
//! its artifacts without touching the output directory.

pub mod data;
pub mod eval;
pub mod meta;
pub mod trees;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};

use mlc_meta::data::{parse_csv, parse_mulan, LabelSpec, MlcDataset, Registry};

#[derive(Debug, thiserror::Error)]
#[error("input file not found: {0}")]
pub struct InputError(pub String);

/// Fails before any work is done if a referenced input is absent.
pub(crate) fn check_inputs(inputs: &[(&str, &Path)]) -> anyhow::Result<()> {
    for (_, p) in inputs {
        if !p.exists() {
            return Err(InputError(p.display().to_string()).into());
        }
    }
    Ok(())
}

/// ARFF with a label count or MULAN XML, or CSV with comma-separated
/// label column names.
pub(crate) fn load_dataset(path: &Path, labels: &str) -> anyhow::Result<MlcDataset> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    Ok(if is_csv {
        let cols: Vec<String> = labels.split(',').map(|s| s.trim().to_string()).collect();
        parse_csv(path, &cols, &BTreeMap::new())?
    } else {
        parse_mulan(path, &LabelSpec::from_arg(labels)?)?
    })
}

pub(crate) fn load_registry(path: Option<&Path>) -> anyhow::Result<Registry> {
    Ok(match path {
        Some(p) => Registry::load(p)?,
        None => Registry::default(),
    })
}

#[derive(Args, Debug)]
pub struct MetaFeaturesArgs {
    /// ARFF or CSV dataset (training part); repeat for several datasets.
    #[arg(long, required = true)]
    pub dataset: Vec<PathBuf>,
    /// Label count (last attributes) or MULAN XML file; label column names
    /// for CSV input.
    #[arg(long)]
    pub labels: String,
    /// Catalogue file; the bundled catalogue by default.
    #[arg(long)]
    pub catalogue: Option<PathBuf>,
    #[arg(long)]
    pub dependence_alpha: Option<f64>,
    #[arg(long)]
    pub small_set_threshold: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Test part with the same schema.
    #[arg(long)]
    pub test: Option<PathBuf>,
    #[arg(long)]
    pub labels: String,
    /// Decimals of cardinality and density in summary.csv.
    #[arg(long, default_value_t = 4)]
    pub precision: usize,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Predictions as JSON or CSV (truth_/score_/pred_ columns).
    #[arg(long)]
    pub predictions: PathBuf,
    /// Training label cardinality, for PCut when only scores are given.
    #[arg(long)]
    pub train_cardinality: Option<f64>,
    /// Measures to report; every measure the input supports by default.
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct PcutArgs {
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub train_cardinality: f64,
    /// Candidate thresholds, ascending; distinct scores plus 0 and 1 by default.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuotaArg {
    Labels,
    Labelsets,
}

#[derive(Args, Debug)]
pub struct StratifyArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub labels: String,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Draw one stratified subsample of this size instead of folds.
    #[arg(long)]
    pub subsample: Option<usize>,
    #[arg(long, value_enum, default_value = "labels")]
    pub quota: QuotaArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Clustering,
    Classification,
    Regression,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeFormat {
    Json,
    Text,
    Dot,
}

#[derive(Args, Debug)]
pub struct TreeLearnArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// JSON file with `id`, `targets`, `descriptive` and `ignore` columns.
    #[arg(long)]
    pub roles: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub f_level: Option<f64>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json,text,dot")]
    pub formats: Vec<TreeFormat>,
}

#[derive(Args, Debug)]
pub struct TreePredictArgs {
    /// tree.json written by tree-learn.
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
    /// Row identifier column.
    #[arg(long)]
    pub id: Option<String>,
}

/// Inputs shared by the meta-learning subcommands.
#[derive(Args, Debug)]
pub struct MetaInputs {
    /// Meta-feature matrix (output of meta-features).
    #[arg(long)]
    pub meta: PathBuf,
    /// Results table with dataset,method,measure,score columns.
    #[arg(long)]
    pub results: PathBuf,
    /// Method families, measure orientations and reliable defaults.
    #[arg(long)]
    pub registry: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PerfTarget {
    Scores,
    Best,
}

#[derive(Args, Debug)]
pub struct LooArgs {
    #[arg(long)]
    pub measure: String,
    /// Methods to model; every method scored for the measure by default.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub f_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// Drop datasets with missing scores instead of failing.
    #[arg(long)]
    pub allow_missing: bool,
}

#[derive(Args, Debug)]
pub struct PerfModelArgs {
    #[command(flatten)]
    pub inputs: MetaInputs,
    #[command(flatten)]
    pub loo: LooArgs,
    #[arg(long, value_enum, default_value = "scores")]
    pub target: PerfTarget,
}

#[derive(Args, Debug)]
pub struct BestMethodArgs {
    #[command(flatten)]
    pub inputs: MetaInputs,
    #[command(flatten)]
    pub loo: LooArgs,
}

#[derive(Args, Debug)]
pub struct TuneOrNotArgs {
    #[command(flatten)]
    pub inputs: MetaInputs,
    #[arg(long)]
    pub measure: String,
    /// Measures for the group differences; the modelled measure by default.
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub f_grid: Option<Vec<f64>>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
    #[arg(long)]
    pub allow_missing: bool,
}

#[derive(Args, Debug)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub inputs: MetaInputs,
    #[arg(long, value_delimiter = ',')]
    pub measures: Option<Vec<String>>,
    #[arg(long)]
    pub k_top: Option<usize>,
    #[arg(long)]
    pub f_level: Option<f64>,
    #[arg(long)]
    pub min_leaf: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RsedArgs {
    /// Success log with dataset,method,attempted,finished columns.
    #[arg(long)]
    pub log: PathBuf,
}

#[derive(Args, Debug)]
pub struct ImprovementArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Loss measure of the default-parameter runs.
    #[arg(long)]
    pub default_measure: String,
    /// Loss measure of the tuned runs.
    #[arg(long)]
    pub tuned_measure: String,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
}
