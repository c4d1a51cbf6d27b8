//! Iterative stratification: k-fold assignment and fixed-size subsampling
//! that keep per-label frequencies close to the full data.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::LabelMatrix;
use crate::{Error, Result};

/// Name of the generator behind the seeded tie-breaking.
pub const RNG_NAME: &str = "chacha8-v1";

/// What the quotas are computed over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quota {
    /// One quota per label.
    #[default]
    Labels,
    /// One quota per distinct labelset.
    Labelsets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldAssignment {
    pub folds: Vec<usize>,
    pub k: usize,
    pub seed: u64,
    pub rng: &'static str,
}

impl FoldAssignment {
    /// Example indices of fold `j`, ascending.
    pub fn fold(&self, j: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] == j).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &f in &self.folds {
            s[f] += 1;
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("example_index,fold\n");
        for (i, f) in self.folds.iter().enumerate() {
            out.push_str(&format!("{i},{f}\n"));
        }
        out
    }
}

/// Rows expressed as quota keys: labels, or a single labelset id.
fn quota_rows(labels: &LabelMatrix, mode: Quota) -> (Vec<Vec<usize>>, usize) {
    match mode {
        Quota::Labels => (
            labels.rows().map(|r| r.iter().map(|&l| l as usize).collect()).collect(),
            labels.n_labels(),
        ),
        Quota::Labelsets => {
            let ids: BTreeMap<&[u32], usize> = labels
                .labelset_counts()
                .into_keys()
                .filter(|k| !k.is_empty())
                .enumerate()
                .map(|(i, k)| (k, i))
                .collect();
            let rows = labels
                .rows()
                .map(|r| if r.is_empty() { vec![] } else { vec![ids[r]] })
                .collect();
            (rows, ids.len())
        }
    }
}

fn pick<R: Rng>(candidates: Vec<usize>, rng: &mut R) -> usize {
    if candidates.len() == 1 {
        candidates[0]
    } else {
        candidates[rng.random_range(0..candidates.len())]
    }
}

/// Indices maximizing `key`, exact ties kept.
fn argmax_all(over: &[usize], key: impl Fn(usize) -> f64) -> Vec<usize> {
    let best = over.iter().map(|&j| key(j)).fold(f64::NEG_INFINITY, f64::max);
    over.iter().copied().filter(|&j| key(j) == best).collect()
}

/// Core of the algorithm: assigns every row to one of `ratios.len()` parts.
fn stratify(rows: &[Vec<usize>], n_keys: usize, ratios: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = rows.len();
    let parts: Vec<usize> = (0..ratios.len()).collect();
    let mut remaining_total: Vec<f64> = ratios.iter().map(|r| r * n as f64).collect();
    let mut pending = vec![0usize; n_keys];
    for r in rows {
        for &l in r {
            pending[l] += 1;
        }
    }
    let mut desired: Vec<Vec<f64>> = ratios
        .iter()
        .map(|r| pending.iter().map(|&c| c as f64 * r).collect())
        .collect();

    let mut assigned: Vec<Option<usize>> = vec![None; n];
    // label with the fewest unassigned positives, lowest index on ties
    while let Some(l) = (0..n_keys).filter(|&l| pending[l] > 0).min_by_key(|&l| pending[l]) {
        for i in 0..n {
            if assigned[i].is_some() || !rows[i].contains(&l) {
                continue;
            }
            let by_label = argmax_all(&parts, |j| desired[j][l]);
            let by_total = argmax_all(&by_label, |j| remaining_total[j]);
            let j = pick(by_total, rng);
            assigned[i] = Some(j);
            for &x in &rows[i] {
                pending[x] -= 1;
                desired[j][x] -= 1.0;
            }
            remaining_total[j] -= 1.0;
        }
    }
    for slot in assigned.iter_mut().filter(|a| a.is_none()) {
        let j = pick(argmax_all(&parts, |j| remaining_total[j]), rng);
        *slot = Some(j);
        remaining_total[j] -= 1.0;
    }
    assigned.into_iter().map(|a| a.expect("every row assigned")).collect()
}

pub fn iterative_stratified_folds(labels: &LabelMatrix, k: usize, seed: u64, mode: Quota) -> Result<FoldAssignment> {
    let n = labels.n_rows();
    if k < 2 {
        return Err(Error::Contract(format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::Contract(format!("{k} folds requested for {n} examples")));
    }
    let (rows, n_keys) = quota_rows(labels, mode);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let folds = stratify(&rows, n_keys, &vec![1.0 / k as f64; k], &mut rng);
    Ok(FoldAssignment {
        folds,
        k,
        seed,
        rng: RNG_NAME,
    })
}

/// Ascending indices of a stratified subsample of exactly `m` examples.
///
/// Rounding in the two-part split can be off by one; the size is then fixed
/// by dropping (or adding) examples of the most frequent labelset of the
/// selected part (or of the remainder).
pub fn stratified_subsample(labels: &LabelMatrix, m: usize, seed: u64, mode: Quota) -> Result<Vec<usize>> {
    let n = labels.n_rows();
    if m == 0 || m > n {
        return Err(Error::Contract(format!("subsample size {m} outside 1..={n}")));
    }
    if m == n {
        return Ok((0..n).collect());
    }
    let (rows, n_keys) = quota_rows(labels, mode);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = m as f64 / n as f64;
    let parts = stratify(&rows, n_keys, &[r, 1.0 - r], &mut rng);
    let mut chosen: Vec<usize> = (0..n).filter(|&i| parts[i] == 0).collect();
    let mut rest: Vec<usize> = (0..n).filter(|&i| parts[i] == 1).collect();
    while chosen.len() > m {
        let i = majority_member(labels, &chosen, true);
        chosen.retain(|&x| x != i);
        rest.push(i);
    }
    while chosen.len() < m {
        let i = majority_member(labels, &rest, false);
        rest.retain(|&x| x != i);
        chosen.push(i);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Member of the most frequent labelset within `pool` (smallest labelset
/// on ties); the highest index if `last`, else the lowest.
fn majority_member(labels: &LabelMatrix, pool: &[usize], last: bool) -> usize {
    let mut groups: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for &i in pool {
        groups.entry(labels.row(i)).or_default().push(i);
    }
    let top = groups.values().map(Vec::len).max().expect("non-empty pool");
    let members = groups
        .into_values()
        .find(|g| g.len() == top)
        .expect("group of max size");
    if last {
        *members.iter().max().expect("non-empty")
    } else {
        *members.iter().min().expect("non-empty")
    }
}

/// Mean over labels of the largest absolute gap between a label's
/// frequency inside a fold and in the whole data.
pub fn label_divergence(labels: &LabelMatrix, folds: &[usize], k: usize) -> f64 {
    let n = labels.n_rows() as f64;
    let overall = labels.label_counts();
    let mut sizes = vec![0usize; k];
    let mut per = vec![vec![0usize; labels.n_labels()]; k];
    for (i, &f) in folds.iter().enumerate() {
        sizes[f] += 1;
        for &l in labels.row(i) {
            per[f][l as usize] += 1;
        }
    }
    let l = labels.n_labels();
    let total: f64 = (0..l)
        .map(|lab| {
            let freq = overall[lab] as f64 / n;
            (0..k)
                .filter(|&j| sizes[j] > 0)
                .map(|j| (per[j][lab] as f64 / sizes[j] as f64 - freq).abs())
                .fold(0.0, f64::max)
        })
        .sum();
    total / l as f64
}
