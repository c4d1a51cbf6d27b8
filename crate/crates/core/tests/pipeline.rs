use std::collections::BTreeMap;

use mlc_meta::data::{Orientation, Registry, ResultsTable, ScoreRow, SuccessLog, SuccessRow};
use mlc_meta::pct::{LearnParams, F_LEVELS};
use mlc_meta::pipeline::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/");

fn registry() -> Registry {
    Registry::load(format!("{FIX}registry.txt")).unwrap()
}

fn fixture() -> (MetaMatrix, ResultsTable, Registry) {
    let reg = registry();
    let meta = MetaMatrix::load(format!("{FIX}meta.csv")).unwrap();
    let results = ResultsTable::load(format!("{FIX}results.csv"), &reg).unwrap();
    (meta, results, reg)
}

fn methods() -> Vec<String> {
    ["RFPCT", "RFDTBR", "EBRJ48"].map(String::from).to_vec()
}

#[test]
fn fixture_best_method_is_learned_perfectly() {
    let (meta, results, reg) = fixture();
    for measure in [
        "AUROC.micro",
        "F1.example-based",
        "hamming_loss",
        "F1.macro",
        "F1.micro",
    ] {
        let md = assemble(&meta, &results, &reg, measure, &methods(), TargetKind::Best, false).unwrap();
        assert!(md.labels().unwrap().iter().all(|l| l != "EBRJ48"));
        let rep = loo_evaluate(&md, &F_LEVELS, 2).unwrap();
        let acc = rep.chosen().score.accuracy.unwrap();
        assert_eq!(acc, 1.0, "{measure}");
        assert!(acc > rep.baseline.accuracy.unwrap());
    }
}

#[test]
fn fixture_scores_target_reports_every_level() {
    let (meta, results, reg) = fixture();
    let md = assemble(&meta, &results, &reg, "F1.macro", &methods(), TargetKind::Scores, false).unwrap();
    let rep = loo_evaluate(&md, &F_LEVELS, 2).unwrap();
    assert_eq!(rep.configs.len(), F_LEVELS.len());
    assert_eq!(rep.baseline.mae.len(), 3);
    assert!(rep.configs.iter().all(|c| c.score.mae.len() == 3));
}

#[test]
fn fixture_tuning_and_landscape() {
    let reg = registry();
    let meta = MetaMatrix::load(format!("{FIX}meta.csv")).unwrap();
    let tuning = ResultsTable::load(format!("{FIX}tuning_results.csv"), &reg).unwrap();
    let rep = tune_or_not(&meta, &tuning, &reg, "hamming_loss", &F_LEVELS, 2, false).unwrap();
    assert_eq!(rep.loo.held_out.len(), 12);
    assert!(rep.auroc.is_some() && rep.auprc.is_some());

    let (_, results, _) = fixture();
    let measures: Vec<String> = vec!["F1.macro".into(), "hamming_loss".into()];
    let ls = landscape(&meta, &results, &reg, &measures, 2, LearnParams::default()).unwrap();
    let covered: usize = ls.leaves.iter().map(|l| l.datasets.len()).sum();
    assert_eq!(covered, 12);
    for leaf in &ls.leaves {
        for counts in leaf.family_counts.values() {
            assert!(counts.values().all(|&c| c <= leaf.datasets.len()));
        }
    }
}

/// Held-out error against the mean of the remaining rows, written out
/// directly from the definition.
fn baseline_oracle(y: &[f64]) -> f64 {
    let r = y.len();
    let mut total = 0.0;
    for held in 0..r {
        let mut s = 0.0;
        for (i, v) in y.iter().enumerate() {
            if i != held {
                s += v;
            }
        }
        total += (y[held] - s / (r as f64 - 1.0)).abs();
    }
    total / r as f64
}

fn scores_dataset(y: &[f64]) -> MetaDataset {
    let (meta, results) = toy_tables(y);
    assemble(
        &meta,
        &results,
        &Registry::default(),
        "F1.macro",
        &["M".to_string()],
        TargetKind::Scores,
        false,
    )
    .unwrap()
}

fn toy_tables(y: &[f64]) -> (MetaMatrix, ResultsTable) {
    let names: Vec<String> = (0..y.len()).map(|i| format!("d{i}")).collect();
    let meta = MetaMatrix::new(
        names.clone(),
        vec!["f".into()],
        (0..y.len()).map(|i| vec![i as f64]).collect(),
    )
    .unwrap();
    let rows = names
        .iter()
        .zip(y)
        .map(|(d, &s)| ScoreRow {
            dataset: d.clone(),
            method: "M".into(),
            measure: "F1.macro".into(),
            score: s,
        })
        .collect();
    (meta, ResultsTable::from_rows(rows, &Registry::default()).unwrap())
}

#[test]
fn three_point_baseline() {
    let md = scores_dataset(&[0.2, 0.4, 0.6]);
    let b = loo_baseline(&md);
    assert!((b.mean_error - 0.2).abs() < 1e-12);
}

#[test]
fn baseline_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let r = rng.random_range(3..=10);
        let y: Vec<f64> = (0..r).map(|_| rng.random_range(0.0..1.0)).collect();
        let b = loo_baseline(&scores_dataset(&y));
        assert!((b.mean_error - baseline_oracle(&y)).abs() < 1e-12);
    }
}

#[test]
fn rsed_grand_mean_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (nd, nm) = (rng.random_range(1..6), rng.random_range(1..6));
        let mut rows = vec![];
        for d in 0..nd {
            for m in 0..nm {
                let a = rng.random_range(1..10u64);
                rows.push(SuccessRow {
                    dataset: format!("d{d}"),
                    method: format!("m{m}"),
                    attempted: a,
                    finished: rng.random_range(0..=a),
                });
            }
        }
        let r = rsed(&SuccessLog::from_rows(rows).unwrap()).unwrap();
        let grand = r.cells.iter().map(|c| c.rsed).sum::<f64>() / r.cells.len() as f64;
        let by_m = r.method_rsed.values().sum::<f64>() / nm as f64;
        let by_d = r.ds_rsed.values().sum::<f64>() / nd as f64;
        assert!((grand - by_m).abs() < 1e-12 && (grand - by_d).abs() < 1e-12);
        assert!(r.cells.iter().all(|c| (0.0..=1.0).contains(&c.rsed)));
    }
}

proptest! {
    #[test]
    fn argbest_ignores_positive_scaling(scores in prop::collection::vec(0.0f64..1.0, 1..8), c in 0.01f64..100.0) {
        let names: Vec<String> = (0..scores.len()).map(|i| format!("m{i}")).collect();
        for o in [Orientation::Higher, Orientation::Lower] {
            let a = argbest(names.iter().map(String::as_str).zip(scores.iter().copied()), o);
            let b = argbest(names.iter().map(String::as_str).zip(scores.iter().map(|s| s * c)), o);
            // scaling can merge or split near-ties only through rounding
            if a.unwrap().1 == b.unwrap().1 {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn improvement_in_unit_interval(d in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let v = relative_improvement(d, t).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn histogram_counts_sum_to_pairs() {
    let reg = registry();
    let tuning = ResultsTable::load(format!("{FIX}tuning_results.csv"), &reg).unwrap();
    let h = improvement_histograms(&tuning, "hamming_loss.default", "hamming_loss", 20).unwrap();
    let expected: BTreeMap<&str, usize> = [("BR", 12), ("CC", 12), ("MLkNN", 12)].into();
    for (m, n) in expected {
        assert_eq!(h.methods[m].counts.iter().sum::<usize>(), n);
    }
}
