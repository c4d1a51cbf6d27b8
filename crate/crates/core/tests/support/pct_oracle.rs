//! Random tables and a brute-force scorer for root splits.

#![allow(dead_code)]

use mlc_meta::data::Column;
use mlc_meta::pct::{DataTable, Targets, Test};
use rand::Rng;

pub fn random_table<R: Rng>(rng: &mut R, max_rows: usize, max_cols: usize, classification: bool) -> DataTable {
    let n = rng.random_range(2..=max_rows);
    let d = rng.random_range(1..=max_cols);
    let cols = (0..d)
        .map(|j| {
            if rng.random_bool(0.7) {
                let levels = rng.random_range(2..12);
                Column::numeric(
                    format!("x{j}"),
                    (0..n)
                        .map(|_| Some(rng.random_range(0..levels) as f64 * 0.5 - 1.0))
                        .collect(),
                )
            } else {
                let k = rng.random_range(1..4);
                let raw: Vec<Option<String>> = (0..n).map(|_| Some(format!("c{}", rng.random_range(0..k)))).collect();
                Column::nominal_from_strings(format!("x{j}"), &raw)
            }
        })
        .collect();
    let targets = if classification {
        let k = rng.random_range(2..4);
        Targets::Class {
            name: "y".into(),
            classes: (0..k).map(|c| format!("k{c}")).collect(),
            codes: (0..n).map(|_| rng.random_range(0..k)).collect(),
        }
    } else {
        let t = rng.random_range(1..4);
        let scale: Vec<f64> = (0..t).map(|_| rng.random_range(0.01..100.0)).collect();
        Targets::Numeric {
            names: (0..t).map(|j| format!("y{j}")).collect(),
            values: (0..n)
                .map(|_| {
                    scale
                        .iter()
                        .map(|s| (rng.random_range(0.0..1.0f64) * 4.0).round() * s)
                        .collect()
                })
                .collect(),
        }
    };
    DataTable::new((0..n).map(|i| format!("r{i}")).collect(), cols, targets).unwrap()
}

fn var(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

fn entropy(codes: &[usize]) -> f64 {
    let mut h = 0.0;
    let n = codes.len() as f64;
    let max = codes.iter().max().copied().unwrap_or(0);
    for c in 0..=max {
        let p = codes.iter().filter(|&&x| x == c).count() as f64 / n;
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Impurity of a row subset, computed from scratch.
fn impurity(table: &DataTable, rows: &[usize], root_var: &[f64]) -> f64 {
    match table.targets() {
        Targets::Numeric { values, .. } => (0..root_var.len())
            .filter(|&j| root_var[j] > 0.0)
            .map(|j| var(&rows.iter().map(|&i| values[i][j]).collect::<Vec<_>>()) / root_var[j])
            .sum(),
        Targets::Class { codes, .. } => entropy(&rows.iter().map(|&i| codes[i]).collect::<Vec<_>>()),
        Targets::None => unreachable!(),
    }
}

pub fn root_variances(table: &DataTable) -> Vec<f64> {
    match table.targets() {
        Targets::Numeric { values, .. } => (0..values[0].len())
            .map(|j| var(&values.iter().map(|r| r[j]).collect::<Vec<_>>()))
            .collect(),
        _ => vec![],
    }
}

/// Score of one candidate test at the root; `None` if a side is empty.
pub fn score(table: &DataTable, column: usize, test: &Test) -> Option<f64> {
    let root_var = root_variances(table);
    let col = &table.descriptive()[column];
    let all: Vec<usize> = (0..table.n_rows()).collect();
    let (left, right): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| match test {
        Test::LessEq { threshold } => col.values[i].unwrap() <= *threshold,
        Test::Equals { category } => col.display_value(i).as_deref() == Some(category.as_str()),
    });
    if left.is_empty() || right.is_empty() {
        return None;
    }
    let n = all.len() as f64;
    Some(
        impurity(table, &all, &root_var)
            - left.len() as f64 / n * impurity(table, &left, &root_var)
            - right.len() as f64 / n * impurity(table, &right, &root_var),
    )
}

/// Best root score over every candidate test.
pub fn best_root_score(table: &DataTable) -> f64 {
    let mut best = 0.0f64;
    for (j, col) in table.descriptive().iter().enumerate() {
        let mut vals: Vec<f64> = col.values.iter().map(|v| v.unwrap()).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let tests: Vec<Test> = if col.kind.is_numeric() {
            vals.windows(2)
                .map(|w| Test::LessEq {
                    threshold: (w[0] + w[1]) / 2.0,
                })
                .collect()
        } else {
            (0..table.n_rows())
                .filter_map(|i| col.display_value(i))
                .map(|category| Test::Equals { category })
                .collect()
        };
        for t in &tests {
            if let Some(s) = score(table, j, t) {
                best = best.max(s);
            }
        }
    }
    best
}
