mod support;

use mlc_meta::pct::{best_split, f_statistic, ftest_accept, learn, LearnParams, Mode, Tree, F_LEVELS};
use mlc_meta::stats::f_upper_tail;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::f_oracle;
use support::pct_oracle::{best_root_score, random_table, score};

#[test]
fn root_split_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..200 {
        let classification = case % 2 == 1;
        let table = random_table(&mut rng, 50, 4, classification);
        let mode = if classification {
            Mode::Classification
        } else {
            Mode::Regression
        };
        let rows: Vec<usize> = (0..table.n_rows()).collect();
        let want = best_root_score(&table);
        match best_split(&table, &rows, mode, 1).unwrap() {
            Some(s) => {
                assert!((s.score - want).abs() < 1e-9, "case {case}: {} vs {want}", s.score);
                let direct = score(&table, s.column, &s.test).unwrap();
                assert!((direct - s.score).abs() < 1e-9);
            }
            None => assert!(want < 1e-9, "case {case}: missed split worth {want}"),
        }
    }
}

fn check_structure(tree: &Tree, n_rows: usize) {
    let mut seen: Vec<&String> = tree.leaves().flat_map(|l| &l.members).collect();
    assert_eq!(seen.len(), n_rows);
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), n_rows);
    for node in &tree.nodes {
        if let Some(s) = &node.split {
            assert!(s.score > 0.0);
        }
    }
}

#[test]
fn stricter_level_prunes_looser_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for case in 0..100 {
        let classification = case % 3 == 0;
        let table = random_table(&mut rng, 50, 4, classification);
        let mode = if classification {
            Mode::Classification
        } else {
            Mode::Regression
        };
        let min_leaf = rng.random_range(1..3);
        let trees: Vec<Tree> = F_LEVELS
            .iter()
            .map(|&f_level| learn(&table, mode, LearnParams { f_level, min_leaf }).unwrap())
            .collect();
        for t in &trees {
            check_structure(t, table.n_rows());
        }
        for w in trees.windows(2) {
            assert!(w[0].is_prune_of(&w[1]), "case {case}");
            assert!(w[0].n_nodes() <= w[1].n_nodes());
        }
    }
}

#[test]
fn rescaling_a_target_keeps_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let table = random_table(&mut rng, 50, 4, false);
        let factor = [1e-3, 0.37, 12.5, 1e4][rng.random_range(0..4)];
        let scaled = table.scale_target(0, factor).unwrap();
        let params = LearnParams {
            f_level: 0.125,
            min_leaf: 1,
        };
        let a = learn(&table, Mode::Regression, params).unwrap();
        let b = learn(&scaled, Mode::Regression, params).unwrap();
        assert_eq!(a.n_nodes(), b.n_nodes());
        for (x, y) in a.nodes.iter().zip(&b.nodes) {
            assert_eq!(
                x.split.as_ref().map(|s| (&s.column, &s.test)),
                y.split.as_ref().map(|s| (&s.column, &s.test))
            );
        }
    }
}

#[test]
fn f_tail_against_quadrature() {
    assert_eq!(f_statistic(10.0, 5.0, 20), 18.0);
    let p = f_upper_tail(18.0, 1.0, 18.0);
    let q = f_oracle::f_upper_tail(18.0, 1.0, 18.0);
    assert!((p - q).abs() < 1e-6, "{p} vs {q}");
    assert!(p <= 0.05 && ftest_accept(10.0, 5.0, 20, 0.05));
    for (f, d2) in [(0.5, 3.0), (2.0, 10.0), (7.5, 40.0), (1.0, 1.0)] {
        let (p, q) = (f_upper_tail(f, 1.0, d2), f_oracle::f_upper_tail(f, 1.0, d2));
        assert!((p - q).abs() < 1e-6, "F={f} df2={d2}: {p} vs {q}");
    }
}

#[test]
fn zero_reduction_always_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..1000 {
        let ss = rng.random_range(0.0..100.0);
        let n = rng.random_range(0..200);
        for level in F_LEVELS {
            assert!(!ftest_accept(ss, ss, n, level));
        }
    }
}
