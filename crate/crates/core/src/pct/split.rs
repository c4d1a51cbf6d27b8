use serde::{Deserialize, Serialize};

use super::table::{DataTable, Targets};
use super::Mode;
use crate::data::ColumnKind;
use crate::stats::entropy_of_counts;
use crate::{Error, Result};

/// Relative margin below which two heuristic scores count as equal.
pub(crate) const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Test {
    /// Rows with `value <= threshold` go left.
    LessEq { threshold: f64 },
    /// Rows whose category equals `category` go left.
    Equals { category: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub column: usize,
    pub column_name: String,
    pub test: Test,
    pub score: f64,
}

/// Descriptive column prepared for split search.
pub(crate) enum Feature<'a> {
    Numeric(Vec<f64>),
    Nominal {
        codes: Vec<usize>,
        categories: &'a [String],
    },
}

/// Target side prepared for split search.
pub(crate) enum Objective<'a> {
    /// Rows of target values with per-target weights (1 / root variance,
    /// 0 for targets without root variance).
    Variance {
        values: &'a [Vec<f64>],
        weights: Vec<f64>,
    },
    Entropy {
        codes: &'a [usize],
        n_classes: usize,
    },
}

pub(crate) fn features(table: &DataTable) -> Vec<Feature<'_>> {
    table
        .descriptive()
        .iter()
        .map(|c| {
            let vals = c.values.iter().map(|v| v.expect("no missing descriptive values"));
            match &c.kind {
                ColumnKind::Numeric => Feature::Numeric(vals.collect()),
                ColumnKind::Nominal { categories } => Feature::Nominal {
                    codes: vals.map(|v| v as usize).collect(),
                    categories,
                },
            }
        })
        .collect()
}

/// Per-target population variance over all rows.
pub(crate) fn column_variances(values: &[Vec<f64>]) -> Vec<f64> {
    let t = values.first().map_or(0, Vec::len);
    (0..t)
        .map(|j| crate::stats::variance(&values.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect()
}

pub(crate) fn weights_from_root(root_variance: &[f64]) -> Vec<f64> {
    root_variance
        .iter()
        .map(|&v| if v > 0.0 { 1.0 / v } else { 0.0 })
        .collect()
}

impl Objective<'_> {
    /// Weighted within-node sum of squares (variance objective) or
    /// `n * Gini` (class objective).
    pub(crate) fn sum_squares(&self, rows: &[usize]) -> f64 {
        let n = rows.len() as f64;
        if rows.is_empty() {
            return 0.0;
        }
        match self {
            Objective::Variance { values, weights } => weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > 0.0)
                .map(|(j, w)| {
                    let first = values[rows[0]][j];
                    if rows.iter().all(|&i| values[i][j] == first) {
                        return 0.0;
                    }
                    let m = rows.iter().map(|&i| values[i][j]).sum::<f64>() / n;
                    w * rows.iter().map(|&i| (values[i][j] - m).powi(2)).sum::<f64>()
                })
                .sum(),
            Objective::Entropy { codes, n_classes } => {
                let counts = class_counts(codes, *n_classes, rows);
                n - counts.iter().map(|&c| (c * c) as f64).sum::<f64>() / n
            }
        }
    }

    /// Impurity scale of the whole problem: the number of active targets
    /// (each normalized to unit root variance) or the maximum class entropy.
    pub(crate) fn scale(&self) -> f64 {
        match self {
            Objective::Variance { weights, .. } => weights.iter().filter(|w| **w > 0.0).count() as f64,
            Objective::Entropy { n_classes, .. } => (*n_classes as f64).log2(),
        }
    }

    /// Node impurity the heuristic reduces: weighted variance sum or class
    /// entropy in bits.
    pub(crate) fn impurity(&self, rows: &[usize]) -> f64 {
        match self {
            Objective::Variance { .. } => self.sum_squares(rows) / rows.len().max(1) as f64,
            Objective::Entropy { codes, n_classes } => entropy_of_counts(class_counts(codes, *n_classes, rows)),
        }
    }
}

pub(crate) fn class_counts(codes: &[usize], k: usize, rows: &[usize]) -> Vec<usize> {
    let mut c = vec![0; k];
    for &i in rows {
        c[codes[i]] += 1;
    }
    c
}

/// Incremental left/right statistics for a sweep over sorted rows.
enum Sweep {
    Variance {
        weights: Vec<f64>,
        mean: Vec<f64>,
        left: Vec<(f64, f64)>,
        total: Vec<(f64, f64)>,
    },
    Entropy {
        left: Vec<usize>,
        total: Vec<usize>,
    },
}

impl Sweep {
    fn new(obj: &Objective, rows: &[usize]) -> Self {
        match obj {
            Objective::Variance { values, weights } => {
                let n = rows.len() as f64;
                let t = weights.len();
                let mean: Vec<f64> = (0..t)
                    .map(|j| rows.iter().map(|&i| values[i][j]).sum::<f64>() / n)
                    .collect();
                let mut total = vec![(0.0, 0.0); t];
                for &i in rows {
                    for j in 0..t {
                        let d = values[i][j] - mean[j];
                        total[j].0 += d;
                        total[j].1 += d * d;
                    }
                }
                Sweep::Variance {
                    weights: weights.clone(),
                    mean,
                    left: vec![(0.0, 0.0); t],
                    total,
                }
            }
            Objective::Entropy { codes, n_classes } => Sweep::Entropy {
                left: vec![0; *n_classes],
                total: class_counts(codes, *n_classes, rows),
            },
        }
    }

    fn reset(&mut self) {
        match self {
            Sweep::Variance { left, .. } => left.iter_mut().for_each(|x| *x = (0.0, 0.0)),
            Sweep::Entropy { left, .. } => left.iter_mut().for_each(|x| *x = 0),
        }
    }

    fn add(&mut self, obj: &Objective, i: usize) {
        match (self, obj) {
            (Sweep::Variance { mean, left, .. }, Objective::Variance { values, .. }) => {
                for (j, acc) in left.iter_mut().enumerate() {
                    let d = values[i][j] - mean[j];
                    acc.0 += d;
                    acc.1 += d * d;
                }
            }
            (Sweep::Entropy { left, .. }, Objective::Entropy { codes, .. }) => left[codes[i]] += 1,
            _ => unreachable!("sweep built from this objective"),
        }
    }

    /// Heuristic score with `n_left` of `n` rows on the left.
    fn score(&self, parent: f64, n_left: usize, n: usize) -> f64 {
        let (nl, nr, nf) = (n_left as f64, (n - n_left) as f64, n as f64);
        match self {
            Sweep::Variance {
                weights, left, total, ..
            } => {
                let mut children = 0.0;
                for ((w, l), t) in weights.iter().zip(left).zip(total) {
                    if *w == 0.0 {
                        continue;
                    }
                    let ss_l = l.1 - l.0 * l.0 / nl;
                    let (r1, r2) = (t.0 - l.0, t.1 - l.1);
                    let ss_r = r2 - r1 * r1 / nr;
                    children += w * (ss_l.max(0.0) + ss_r.max(0.0));
                }
                parent - children / nf
            }
            Sweep::Entropy { left, total } => {
                let right = total.iter().zip(left).map(|(t, l)| t - l);
                let h = nl / nf * entropy_of_counts(left.iter().copied()) + nr / nf * entropy_of_counts(right);
                parent - h
            }
        }
    }
}

/// Midpoint threshold between consecutive distinct values, falling back to
/// the lower value when the midpoint rounds onto the upper one.
pub(crate) fn midpoint(a: f64, b: f64) -> f64 {
    let m = 0.5 * a + 0.5 * b;
    if m >= a && m < b {
        m
    } else {
        a
    }
}

/// Exhaustive search over numeric thresholds and nominal one-vs-rest tests.
pub(crate) fn search(
    features: &[Feature],
    names: &[&str],
    obj: &Objective,
    rows: &[usize],
    min_leaf: usize,
) -> Option<Split> {
    let n = rows.len();
    if n < 2 || n < 2 * min_leaf.max(1) {
        return None;
    }
    let parent = obj.impurity(rows);
    if parent <= 0.0 {
        return None;
    }
    let min_gain = TIE_EPS * obj.scale();
    let mut best: Option<Split> = None;
    let mut offer = |column: usize, test: Test, score: f64| {
        if score <= min_gain {
            return;
        }
        if best.as_ref().is_none_or(|b| score > b.score + TIE_EPS * b.score) {
            best = Some(Split {
                column,
                column_name: names[column].to_string(),
                test,
                score,
            });
        }
    };
    let mut sweep = Sweep::new(obj, rows);
    for (c, f) in features.iter().enumerate() {
        sweep.reset();
        match f {
            Feature::Numeric(xs) => {
                let mut sorted = rows.to_vec();
                sorted.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
                for pos in 0..n - 1 {
                    sweep.add(obj, sorted[pos]);
                    let (a, b) = (xs[sorted[pos]], xs[sorted[pos + 1]]);
                    let n_left = pos + 1;
                    if a == b || n_left < min_leaf || n - n_left < min_leaf {
                        continue;
                    }
                    offer(
                        c,
                        Test::LessEq {
                            threshold: midpoint(a, b),
                        },
                        sweep.score(parent, n_left, n),
                    );
                }
            }
            Feature::Nominal { codes, categories } => {
                for (code, name) in categories.iter().enumerate() {
                    sweep.reset();
                    let mut n_left = 0;
                    for &i in rows {
                        if codes[i] == code {
                            sweep.add(obj, i);
                            n_left += 1;
                        }
                    }
                    if n_left < min_leaf.max(1) || n - n_left < min_leaf.max(1) {
                        continue;
                    }
                    offer(
                        c,
                        Test::Equals { category: name.clone() },
                        sweep.score(parent, n_left, n),
                    );
                }
            }
        }
    }
    best
}

/// Whether row `i` of a prepared feature goes left under `test`.
pub(crate) fn goes_left(feature: &Feature, test: &Test, i: usize) -> bool {
    match (feature, test) {
        (Feature::Numeric(xs), Test::LessEq { threshold }) => xs[i] <= *threshold,
        (Feature::Nominal { codes, categories }, Test::Equals { category }) => &categories[codes[i]] == category,
        _ => false,
    }
}

/// Best split of the given rows of a table, with targets normalized by
/// their variance over the whole table. Clustering uses the standardized
/// numeric descriptive columns as targets.
pub fn best_split(table: &DataTable, rows: &[usize], mode: Mode, min_leaf: usize) -> Result<Option<Split>> {
    if let Some(&bad) = rows.iter().find(|&&i| i >= table.n_rows()) {
        return Err(Error::Contract(format!("row {bad} outside the table")));
    }
    let feats = features(table);
    let names: Vec<&str> = table.descriptive().iter().map(|c| c.name.as_str()).collect();
    let standardized;
    let obj = match (mode, table.targets()) {
        (Mode::Clustering, _) => {
            standardized = table.standardized_descriptive().1;
            let w = weights_from_root(&column_variances(&standardized));
            Objective::Variance {
                values: &standardized,
                weights: w,
            }
        }
        (Mode::Regression, Targets::Numeric { values, .. }) => Objective::Variance {
            values,
            weights: weights_from_root(&column_variances(values)),
        },
        (Mode::Classification, Targets::Class { classes, codes, .. }) => Objective::Entropy {
            codes,
            n_classes: classes.len(),
        },
        (m, _) => return Err(Error::Contract(format!("table targets do not fit {m} mode"))),
    };
    Ok(search(&feats, &names, &obj, rows, min_leaf))
}
