#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_mlc-meta");

pub fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn run_in(out: &Path, args: &[String]) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("MLCMETA_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn argv(parts: &[&str]) -> Vec<String> {
    parts
        .iter()
        .map(|p| match p.strip_prefix('@') {
            Some(f) => fixture(f),
            None => p.to_string(),
        })
        .collect()
}

/// One invocation per subcommand over the shipped fixtures; `@name`
/// stands for a fixture path.
pub fn invocations() -> Vec<(&'static str, Vec<String>)> {
    vec![
        (
            "meta-features",
            argv(&[
                "meta-features",
                "--dataset",
                "@toy.arff",
                "--dataset",
                "@abpm_train.arff",
                "--labels",
                "3",
            ]),
        ),
        (
            "summarize",
            argv(&["summarize", "--dataset", "@abpm_train.arff", "--labels", "6"]),
        ),
        (
            "evaluate",
            argv(&[
                "evaluate",
                "--predictions",
                "@predictions.csv",
                "--train-cardinality",
                "1.5",
            ]),
        ),
        (
            "pcut",
            argv(&[
                "pcut",
                "--predictions",
                "@predictions.csv",
                "--train-cardinality",
                "1.5",
            ]),
        ),
        (
            "stratify",
            argv(&[
                "stratify",
                "--dataset",
                "@abpm_train.arff",
                "--labels",
                "6",
                "--folds",
                "5",
                "--seed",
                "17",
            ]),
        ),
        (
            "tree-learn",
            argv(&[
                "tree-learn",
                "--table",
                "@tree_table.csv",
                "--roles",
                "@tree_roles.json",
                "--mode",
                "regression",
                "--f-level",
                "0.1",
            ]),
        ),
        (
            "tree-predict",
            argv(&[
                "tree-predict",
                "--tree",
                "@tree_model.json",
                "--table",
                "@tree_table.csv",
                "--id",
                "id",
            ]),
        ),
        (
            "landscape",
            argv(&[
                "landscape",
                "--meta",
                "@meta.csv",
                "--results",
                "@results.csv",
                "--measures",
                "F1.macro,hamming_loss",
                "--k-top",
                "1",
            ]),
        ),
        (
            "perf-model",
            argv(&[
                "perf-model",
                "--meta",
                "@meta.csv",
                "--results",
                "@results.csv",
                "--measure",
                "F1.macro",
                "--methods",
                "RFPCT,RFDTBR,EBRJ48",
            ]),
        ),
        (
            "best-method",
            argv(&[
                "best-method",
                "--meta",
                "@meta.csv",
                "--results",
                "@results.csv",
                "--measure",
                "hamming_loss",
            ]),
        ),
        (
            "tune-or-not",
            argv(&[
                "tune-or-not",
                "--meta",
                "@meta.csv",
                "--results",
                "@tuning_results.csv",
                "--measure",
                "hamming_loss",
                "--measures",
                "hamming_loss,F1.macro",
            ]),
        ),
        ("rsed", argv(&["rsed", "--log", "@success.csv"])),
        (
            "improvement",
            argv(&[
                "improvement",
                "--results",
                "@tuning_results.csv",
                "--default-measure",
                "hamming_loss.default",
                "--tuned-measure",
                "hamming_loss",
            ]),
        ),
    ]
}

/// Sorted (file name, bytes) of a directory.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map(|rd| rd.map(|e| e.unwrap().path()).collect())
        .unwrap_or_default();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}
