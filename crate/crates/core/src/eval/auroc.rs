use ndarray::{Array2, Axis};

use super::shape_error;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AurocMode {
    /// Pool every (example, label) cell.
    Micro,
    /// Average per-label values over labels with both classes.
    Macro,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AurocResult {
    pub value: f64,
    /// Labels left out of the macro average for lacking a class.
    pub skipped: Vec<usize>,
}

/// Rank-statistic AUC with midranks; `None` without both classes.
fn auc(pairs: &mut [(f64, bool)]) -> Option<f64> {
    let pos = pairs.iter().filter(|p| p.1).count();
    let neg = pairs.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        while j < pairs.len() && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        // ranks i+1..=j share their mean
        let mid = (i + 1 + j) as f64 / 2.0;
        rank_sum += mid * pairs[i..j].iter().filter(|p| p.1).count() as f64;
        i = j;
    }
    let p = pos as f64;
    Some((rank_sum - p * (p + 1.0) / 2.0) / (p * neg as f64))
}

pub fn auroc_detail(truth: &Array2<bool>, scores: &Array2<f64>, mode: AurocMode) -> Result<AurocResult> {
    if truth.dim() != scores.dim() {
        return Err(shape_error("scores", scores.dim(), truth.dim()));
    }
    match mode {
        AurocMode::Micro => {
            let mut cells: Vec<(f64, bool)> = scores.iter().copied().zip(truth.iter().copied()).collect();
            let value = auc(&mut cells)
                .ok_or_else(|| Error::Undefined("AUROC.micro needs a positive and a negative cell".into()))?;
            Ok(AurocResult { value, skipped: vec![] })
        }
        AurocMode::Macro => {
            let mut total = 0.0;
            let mut used = 0;
            let mut skipped = vec![];
            for (l, (t, s)) in truth.axis_iter(Axis(1)).zip(scores.axis_iter(Axis(1))).enumerate() {
                let mut cells: Vec<(f64, bool)> = s.iter().copied().zip(t.iter().copied()).collect();
                match auc(&mut cells) {
                    Some(v) => {
                        total += v;
                        used += 1;
                    }
                    None => skipped.push(l),
                }
            }
            if used == 0 {
                return Err(Error::Undefined("AUROC.macro: no label has both classes".into()));
            }
            Ok(AurocResult {
                value: total / used as f64,
                skipped,
            })
        }
    }
}

pub fn auroc(truth: &Array2<bool>, scores: &Array2<f64>, mode: AurocMode) -> Result<f64> {
    auroc_detail(truth, scores, mode).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn four_cell_example() {
        let t = array![[true, false, true, false]];
        let s = array![[0.9, 0.8, 0.4, 0.1]];
        assert_eq!(auroc(&t, &s, AurocMode::Micro).unwrap(), 0.75);
    }

    #[test]
    fn perfect_and_tied() {
        let t = array![[true, false], [false, true]];
        assert_eq!(auroc(&t, &t.mapv(|b| b as u8 as f64), AurocMode::Micro).unwrap(), 1.0);
        assert_eq!(
            auroc(&t, &array![[0.3, 0.3], [0.3, 0.3]], AurocMode::Micro).unwrap(),
            0.5
        );
    }

    #[test]
    fn macro_skips_single_class_labels() {
        let t = array![[true, true], [false, true]];
        let s = array![[0.8, 0.1], [0.2, 0.5]];
        let r = auroc_detail(&t, &s, AurocMode::Macro).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.skipped, vec![1]);
    }

    #[test]
    fn undefined_without_both_classes() {
        let t = array![[true, true]];
        let s = array![[0.8, 0.1]];
        assert!(matches!(auroc(&t, &s, AurocMode::Micro), Err(Error::Undefined(_))));
        assert!(matches!(auroc(&t, &s, AurocMode::Macro), Err(Error::Undefined(_))));
    }
}
