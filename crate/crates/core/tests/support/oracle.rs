//! Direct-from-definition meta-feature oracle over dense inputs. Written
//! independently of the library's feature code: labelsets are keyed by
//! strings, statistics are recomputed with naive loops.

#![allow(dead_code)]

use std::collections::HashMap;

use mlc_meta::data::{Column, ColumnKind, LabelMatrix, MlcDataset, Role};
use rand::Rng;

pub struct DenseDataset {
    /// (numeric?, values, number of categories)
    pub columns: Vec<(bool, Vec<Option<f64>>, usize)>,
    pub labels: Vec<Vec<bool>>,
}

impl DenseDataset {
    pub fn from_dataset(ds: &MlcDataset) -> Self {
        let columns = ds
            .features()
            .iter()
            .map(|c| match &c.kind {
                ColumnKind::Numeric => (true, c.values.clone(), 0),
                ColumnKind::Nominal { categories } => (false, c.values.clone(), categories.len()),
            })
            .collect();
        DenseDataset {
            columns,
            labels: ds.labels().to_dense(),
        }
    }
}

pub fn random_dataset<R: Rng>(rng: &mut R, max_n: usize, max_l: usize, max_d: usize) -> MlcDataset {
    let n = rng.random_range(1..=max_n);
    let l = rng.random_range(2..=max_l);
    let d = rng.random_range(1..=max_d);
    let density = rng.random_range(0.05..0.9);
    let labels: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..l).map(|_| rng.random_bool(density)).collect())
        .collect();
    let features = (0..d)
        .map(|j| {
            let missing = if rng.random_bool(0.3) { 0.2 } else { 0.0 };
            if rng.random_bool(0.6) {
                let scale = rng.random_range(0.1..100.0);
                let discrete = rng.random_bool(0.3);
                let vals = (0..n)
                    .map(|_| {
                        if rng.random_bool(missing) {
                            None
                        } else if discrete {
                            Some(rng.random_range(0..4) as f64)
                        } else {
                            Some(rng.random_range(-1.0..1.0) * scale)
                        }
                    })
                    .collect();
                Column::numeric(format!("f{j}"), vals)
            } else {
                let k = rng.random_range(1..5);
                let raw: Vec<Option<String>> = (0..n)
                    .map(|_| {
                        if rng.random_bool(missing) {
                            None
                        } else {
                            Some(format!("c{}", rng.random_range(0..k)))
                        }
                    })
                    .collect();
                Column::nominal_from_strings(format!("f{j}"), &raw)
            }
        })
        .collect();
    MlcDataset::new(
        "random",
        Role::Train,
        features,
        LabelMatrix::from_dense(&labels, l).unwrap(),
        (0..l).map(|i| format!("l{i}")).collect(),
    )
    .unwrap()
}

fn avg(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        let mut s = 0.0;
        for x in xs {
            s += x;
        }
        s / xs.len() as f64
    }
}

fn pop_moment(xs: &[f64], k: i32) -> f64 {
    let m = avg(xs);
    avg(&xs.iter().map(|x| (x - m).powi(k)).collect::<Vec<_>>())
}

fn all_same(xs: &[f64]) -> bool {
    xs.iter().all(|x| *x == xs[0])
}

fn skew(xs: &[f64]) -> f64 {
    if xs.len() < 2 || all_same(xs) {
        0.0
    } else {
        pop_moment(xs, 3) / pop_moment(xs, 2).powf(1.5)
    }
}

fn kurt(xs: &[f64]) -> f64 {
    if xs.len() < 2 || all_same(xs) {
        0.0
    } else {
        pop_moment(xs, 4) / pop_moment(xs, 2).powi(2) - 3.0
    }
}

fn sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 || all_same(xs) {
        0.0
    } else {
        pop_moment(xs, 2).sqrt()
    }
}

fn cv(xs: &[f64]) -> f64 {
    let m = avg(xs);
    if m == 0.0 {
        0.0
    } else {
        sd(xs) / m
    }
}

fn entropy(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 && p < 1.0 {
            h -= p * p.log2();
        }
    }
    h
}

fn maxf(xs: &[f64]) -> f64 {
    xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

pub fn meta_features(ds: &DenseDataset, alpha_critical: f64, small: usize) -> HashMap<String, f64> {
    let mut f = HashMap::new();
    let n = ds.labels.len();
    let l = ds.labels[0].len();
    let d = ds.columns.len();
    let nf = n as f64;
    let lf = l as f64;
    let df = d as f64;

    let key = |row: &Vec<bool>| row.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>();
    let mut sets: HashMap<String, usize> = HashMap::new();
    for row in &ds.labels {
        *sets.entry(key(row)).or_default() += 1;
    }
    let distinct = sets.len() as f64;

    let mut put = |k: &str, v: f64| {
        f.insert(k.to_string(), v);
    };
    put("D.1", df);
    put("D.2", nf);
    put("D.3", lf);
    put("D.4", distinct);
    put("D.5", lf * nf * df);
    put("D.6", nf / df);
    put("D.7", df / nf);
    put("D.8", nf / lf);
    put("D.9", lf / nf);
    put("D.10", df / lf);
    put("D.11", lf / df);
    put("D.12", nf * df);
    put("D.13", nf * lf);
    put("D.14", df * lf);
    put("D.15", distinct / nf);

    // attributes
    let mut n_num = 0;
    let (mut means, mut sds, mut sks, mut kus) = (vec![], vec![], vec![], vec![]);
    let mut ents = vec![];
    let mut nominal_idx = vec![];
    for (j, (numeric, vals, k)) in ds.columns.iter().enumerate() {
        let obs: Vec<f64> = vals.iter().filter_map(|v| *v).collect();
        if *numeric {
            n_num += 1;
            if !obs.is_empty() {
                means.push(avg(&obs));
                sds.push(sd(&obs));
                sks.push(skew(&obs));
                kus.push(kurt(&obs));
            }
        } else {
            nominal_idx.push(j);
            let probs: Vec<f64> = (0..*k)
                .map(|c| obs.iter().filter(|v| **v == c as f64).count() as f64 / obs.len().max(1) as f64)
                .collect();
            ents.push(entropy(&probs));
        }
    }
    put("A.SF.1", n_num as f64);
    put("A.SF.2", (d - n_num) as f64);
    put("A.SF.3", avg(&sks));
    put("A.SF.4", avg(&means));
    put("A.SF.5", avg(&sds));
    put("A.SF.6", avg(&kus));
    put("A.IT.1", avg(&ents));
    let mut per_label = vec![];
    for lab in 0..l {
        let mut grs = vec![];
        for &j in &nominal_idx {
            let (_, vals, k) = &ds.columns[j];
            let rows: Vec<usize> = (0..n).filter(|&i| vals[i].is_some()).collect();
            let m = rows.len() as f64;
            if rows.is_empty() {
                grs.push(0.0);
                continue;
            }
            let p_pos = rows.iter().filter(|&&i| ds.labels[i][lab]).count() as f64 / m;
            let h_label = entropy(&[p_pos, 1.0 - p_pos]);
            let mut h_attr_probs = vec![];
            let mut h_cond = 0.0;
            for c in 0..*k {
                let sub: Vec<usize> = rows.iter().copied().filter(|&i| vals[i] == Some(c as f64)).collect();
                if sub.is_empty() {
                    continue;
                }
                let w = sub.len() as f64 / m;
                h_attr_probs.push(w);
                let pp = sub.iter().filter(|&&i| ds.labels[i][lab]).count() as f64 / sub.len() as f64;
                h_cond += w * entropy(&[pp, 1.0 - pp]);
            }
            let split = entropy(&h_attr_probs);
            grs.push(if split == 0.0 {
                0.0
            } else {
                ((h_label - h_cond) / split).max(0.0)
            });
        }
        per_label.push(avg(&grs));
    }
    put("A.IT.2", if nominal_idx.is_empty() { 0.0 } else { avg(&per_label) });

    // label distribution
    let sizes: Vec<f64> = ds
        .labels
        .iter()
        .map(|r| r.iter().filter(|b| **b).count() as f64)
        .collect();
    let counts: Vec<usize> = (0..l).map(|j| ds.labels.iter().filter(|r| r[j]).count()).collect();
    let lab_ent: Vec<f64> = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / nf;
            entropy(&[p, 1.0 - p])
        })
        .collect();
    put("L.DL.G.1", avg(&sizes));
    put("L.DL.G.2", avg(&sizes) / lf);
    put("L.DL.G.3", avg(&lab_ent));
    put("L.DL.G.4", skew(&sizes));
    put("L.DL.G.5", maxf(&lab_ent).max(0.0));
    put("L.DL.G.6", kurt(&sizes));
    put("L.DL.G.7", *counts.iter().min().unwrap() as f64 / nf);

    // imbalance
    let maxc = *counts.iter().max().unwrap() as f64;
    let ir: Vec<f64> = counts.iter().filter(|&&c| c > 0).map(|&c| maxc / c as f64).collect();
    if ir.is_empty() {
        put("L.DL.I.E.1", 1.0);
        put("L.DL.I.E.2", 1.0);
        put("L.DL.I.E.3", 0.0);
    } else {
        put("L.DL.I.E.1", avg(&ir));
        put("L.DL.I.E.2", maxf(&ir));
        put("L.DL.I.E.3", cv(&ir));
    }
    let intra: Vec<f64> = counts
        .iter()
        .filter(|&&c| c > 0 && c < n)
        .map(|&c| {
            let pos = c as f64;
            let neg = (n - c) as f64;
            pos.max(neg) / pos.min(neg)
        })
        .collect();
    if intra.is_empty() {
        put("L.DL.I.A.1", 1.0);
        put("L.DL.I.A.2", 1.0);
        put("L.DL.I.A.3", 0.0);
    } else {
        put("L.DL.I.A.1", avg(&intra));
        put("L.DL.I.A.2", maxf(&intra));
        put("L.DL.I.A.3", cv(&intra));
    }
    let set_counts: Vec<f64> = sets.values().map(|&c| c as f64).collect();
    let top = maxf(&set_counts);
    let set_ir: Vec<f64> = set_counts.iter().map(|c| top / c).collect();
    put("L.DL.I.A.4", avg(&set_ir));
    put("L.DL.I.A.5", maxf(&set_ir));

    // relationships
    put("L.RL.1", distinct / 2f64.powf(lf));
    put("L.RL.2", set_counts.iter().filter(|c| **c == 1.0).count() as f64 / nf);
    let irl = |j: usize| maxc / counts[j] as f64;
    let scumbles: Vec<f64> = ds
        .labels
        .iter()
        .map(|row| {
            let v: Vec<f64> = (0..l).filter(|&j| row[j]).map(irl).collect();
            if v.is_empty() || all_same(&v) {
                0.0
            } else {
                let prod: f64 = v.iter().product();
                1.0 - prod.powf(1.0 / v.len() as f64) / avg(&v)
            }
        })
        .collect();
    put("L.RL.3", avg(&scumbles));
    put("L.RL.4", cv(&scumbles));
    put("L.RL.5", nf / distinct);
    put(
        "L.RL.6",
        set_counts.iter().filter(|c| **c <= small as f64).count() as f64 / distinct,
    );
    put("L.RL.7", top);
    put("L.RL.8", sd(&set_counts));
    let (mut chis, mut phis, mut dep) = (vec![], vec![], 0.0);
    for a in 0..l {
        for b in a + 1..l {
            let mut t = [[0.0f64; 2]; 2];
            for row in &ds.labels {
                t[row[a] as usize][row[b] as usize] += 1.0;
            }
            let r0 = t[0][0] + t[0][1];
            let r1 = t[1][0] + t[1][1];
            let c0 = t[0][0] + t[1][0];
            let c1 = t[0][1] + t[1][1];
            let (chi, phi) = if r0 * r1 * c0 * c1 == 0.0 {
                (0.0, 0.0)
            } else {
                // sum over cells of (observed - expected)^2 / expected
                let mut chi = 0.0;
                for (i, r) in [r0, r1].iter().enumerate() {
                    for (j, c) in [c0, c1].iter().enumerate() {
                        let e = r * c / nf;
                        chi += (t[i][j] - e).powi(2) / e;
                    }
                }
                (chi, (chi / nf).sqrt())
            };
            chis.push(chi);
            phis.push(phi);
            if chi > alpha_critical {
                dep += 1.0;
            }
        }
    }
    put("L.RL.9", avg(&chis));
    put("L.RL.10", avg(&phis));
    put("L.RL.11", dep);
    put("L.RL.12", dep / chis.len() as f64);
    f
}
