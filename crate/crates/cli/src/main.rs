//! `mlc-meta`: batch runner for multi-label meta-analysis.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::*;
use config::{ConfigError, Run};

#[derive(Parser, Debug)]
#[command(
    name = "mlc-meta",
    version,
    about = "Meta-analysis of multi-label classification experiments"
)]
struct Cli {
    /// TOML file with default values for the flags below and for shared
    /// parameters (f_grid, f_level, min_leaf, dependence_alpha,
    /// small_set_threshold, k_top, measures).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output artifacts.
    #[arg(long, global = true, env = "MLCMETA_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Seed of the only stochastic step (stratification ties).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Meta-feature vectors of one or more datasets.
    MetaFeatures(MetaFeaturesArgs),
    /// Size and label statistics of a train (and test) part.
    Summarize(SummarizeArgs),
    /// Evaluation measures of a prediction file.
    Evaluate(EvaluateArgs),
    /// Proportional-cut threshold of a score matrix.
    Pcut(PcutArgs),
    /// Iteratively stratified folds or a stratified subsample.
    Stratify(StratifyArgs),
    /// Learns a predictive clustering tree from a CSV table.
    TreeLearn(TreeLearnArgs),
    /// Applies a learned tree to a CSV table.
    TreePredict(TreePredictArgs),
    /// Clustering tree over meta features, annotated with top families.
    Landscape(LandscapeArgs),
    /// Leave-one-dataset-out performance prediction.
    PerfModel(PerfModelArgs),
    /// Leave-one-dataset-out best-method selection.
    BestMethod(BestMethodArgs),
    /// Whether tuning beats the reliable-defaults group.
    TuneOrNot(TuneOrNotArgs),
    /// Ratio of successfully finished experiments.
    Rsed(RsedArgs),
    /// Histograms of the relative improvement from tuning.
    Improvement(ImprovementArgs),
}

impl Command {
    fn execute(&self, run: &Run) -> anyhow::Result<output::Output> {
        match self {
            Command::MetaFeatures(a) => data::meta_features(run, a),
            Command::Summarize(a) => data::summarize(run, a),
            Command::Evaluate(a) => eval::evaluate(run, a),
            Command::Pcut(a) => eval::pcut(run, a),
            Command::Stratify(a) => data::stratify(run, a),
            Command::TreeLearn(a) => trees::tree_learn(run, a),
            Command::TreePredict(a) => trees::tree_predict(run, a),
            Command::Landscape(a) => meta::landscape(run, a),
            Command::PerfModel(a) => meta::perf_model(run, a),
            Command::BestMethod(a) => meta::best_method(run, a),
            Command::TuneOrNot(a) => meta::tune_or_not(run, a),
            Command::Rsed(a) => meta::rsed(run, a),
            Command::Improvement(a) => meta::improvement(run, a),
        }
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(e) = e.downcast_ref::<mlc_meta::Error>() {
        e.kind()
    } else if e.downcast_ref::<ConfigError>().is_some() {
        "config"
    } else if e.downcast_ref::<InputError>().is_some() {
        "input"
    } else {
        "io"
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 on --help/--version
    let cli = Cli::parse();
    let result = Run::resolve(cli.config.as_deref(), cli.out_dir.clone(), cli.seed).and_then(|run| {
        let out = cli.command.execute(&run)?;
        out.write(&run.out_dir)
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let details = match e.downcast_ref::<mlc_meta::Error>() {
                Some(mlc_meta::Error::Missing(items)) => items.clone(),
                _ => vec![],
            };
            let report = json!({
                "error": {
                    "kind": error_kind(&e),
                    "message": format!("{e:#}"),
                    "details": details,
                }
            });
            eprintln!("{report}");
            ExitCode::from(1)
        }
    }
}
