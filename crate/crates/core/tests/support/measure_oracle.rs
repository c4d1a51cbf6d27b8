//! Cell-enumeration oracle for bipartition measures and a pairwise AUC.

#![allow(dead_code)]

use std::collections::HashMap;

use ndarray::Array2;
use rand::Rng;

pub fn random_pair<R: Rng>(rng: &mut R, max_n: usize, max_l: usize) -> (Array2<bool>, Array2<bool>) {
    let n = rng.random_range(1..=max_n);
    let l = rng.random_range(1..=max_l);
    let t = Array2::from_shape_fn((n, l), |_| rng.random_bool(0.4));
    let p = Array2::from_shape_fn((n, l), |_| rng.random_bool(0.4));
    (t, p)
}

fn div(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

pub fn measures(t: &Array2<bool>, p: &Array2<bool>) -> HashMap<&'static str, f64> {
    let (n, l) = t.dim();
    let mut out = HashMap::new();
    let mut mismatched = 0.0;
    let (mut subset, mut acc, mut pr, mut re, mut f1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        // enumerate the example's cells into the four kinds
        let mut k = [0.0f64; 4]; // tp fp fn tn
        for j in 0..l {
            let slot = match (t[[i, j]], p[[i, j]]) {
                (true, true) => 0,
                (false, true) => 1,
                (true, false) => 2,
                (false, false) => 3,
            };
            k[slot] += 1.0;
        }
        mismatched += k[1] + k[2];
        if k[1] + k[2] == 0.0 {
            subset += 1.0;
        }
        if k[0] + k[1] + k[2] == 0.0 {
            acc += 1.0;
            pr += 1.0;
            re += 1.0;
            f1 += 1.0;
        } else {
            acc += k[0] / (k[0] + k[1] + k[2]);
            pr += div(k[0], k[0] + k[1]);
            re += div(k[0], k[0] + k[2]);
            f1 += 2.0 * k[0] / (2.0 * k[0] + k[1] + k[2]);
        }
    }
    let nf = n as f64;
    out.insert("hamming_loss", mismatched / (nf * l as f64));
    out.insert("subset_accuracy", subset / nf);
    out.insert("accuracy.example-based", acc / nf);
    out.insert("precision.example-based", pr / nf);
    out.insert("recall.example-based", re / nf);
    out.insert("F1.example-based", f1 / nf);

    let mut pooled = [0.0f64; 3];
    let (mut mp, mut mr, mut mf) = (0.0, 0.0, 0.0);
    for j in 0..l {
        let mut k = [0.0f64; 3];
        for i in 0..n {
            if t[[i, j]] && p[[i, j]] {
                k[0] += 1.0;
            } else if p[[i, j]] {
                k[1] += 1.0;
            } else if t[[i, j]] {
                k[2] += 1.0;
            }
        }
        for x in 0..3 {
            pooled[x] += k[x];
        }
        mp += div(k[0], k[0] + k[1]);
        mr += div(k[0], k[0] + k[2]);
        mf += div(2.0 * k[0], 2.0 * k[0] + k[1] + k[2]);
    }
    let lf = l as f64;
    out.insert("precision.micro", div(pooled[0], pooled[0] + pooled[1]));
    out.insert("recall.micro", div(pooled[0], pooled[0] + pooled[2]));
    out.insert(
        "F1.micro",
        div(2.0 * pooled[0], 2.0 * pooled[0] + pooled[1] + pooled[2]),
    );
    out.insert("precision.macro", mp / lf);
    out.insert("recall.macro", mr / lf);
    out.insert("F1.macro", mf / lf);
    out
}

/// Fraction of positive-negative pairs ranked correctly, ties counting 1/2.
pub fn pairwise_auc(truth: &[bool], scores: &[f64]) -> Option<f64> {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &ti) in truth.iter().enumerate() {
        for (j, &tj) in truth.iter().enumerate() {
            if ti && !tj {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    (pairs > 0.0).then(|| wins / pairs)
}
