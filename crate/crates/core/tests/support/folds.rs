#![allow(dead_code)]

use mlc_meta::data::LabelMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_labels<R: Rng>(rng: &mut R, n: usize, l: usize) -> LabelMatrix {
    // skewed label frequencies so that stratification matters
    let p: Vec<f64> = (0..l).map(|j| 0.05 + 0.5 / (j + 1) as f64).collect();
    let rows = (0..n)
        .map(|_| (0..l as u32).filter(|&j| rng.random_bool(p[j as usize])).collect())
        .collect();
    LabelMatrix::new(l, rows).unwrap()
}

pub fn random_folds<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut folds = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % k;
    }
    folds
}
