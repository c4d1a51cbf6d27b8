use ndarray::{Array2, Axis};

use super::{shape_error, Counts, MeasureReport};
use crate::Result;

fn check(truth: &Array2<bool>, pred: &Array2<bool>) -> Result<()> {
    if truth.dim() != pred.dim() {
        return Err(shape_error("bipartition", pred.dim(), truth.dim()));
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-label contingency counts of a bipartition.
pub fn contingency(truth: &Array2<bool>, pred: &Array2<bool>) -> Result<Vec<Counts>> {
    check(truth, pred)?;
    Ok(truth
        .axis_iter(Axis(1))
        .zip(pred.axis_iter(Axis(1)))
        .map(|(t, p)| {
            let mut c = Counts::default();
            for (&y, &z) in t.iter().zip(p.iter()) {
                match (y, z) {
                    (true, true) => c.tp += 1,
                    (false, true) => c.fp += 1,
                    (true, false) => c.fn_ += 1,
                    (false, false) => c.tn += 1,
                }
            }
            c
        })
        .collect())
}

/// Hamming loss, subset accuracy and per-example set statistics averaged
/// over examples. An example with empty truth and empty prediction scores 1
/// on every set statistic; other zero denominators score 0.
pub fn example_based(truth: &Array2<bool>, pred: &Array2<bool>) -> Result<MeasureReport> {
    let counts = contingency(truth, pred)?;
    let (n, l) = truth.dim();
    let wrong: usize = counts.iter().map(|c| c.fp + c.fn_).sum();

    let (mut exact, mut acc, mut prec, mut rec, mut f1) = (0usize, 0.0, 0.0, 0.0, 0.0);
    for (t, p) in truth.outer_iter().zip(pred.outer_iter()) {
        let (mut inter, mut nt, mut np) = (0usize, 0usize, 0usize);
        for (&y, &z) in t.iter().zip(p.iter()) {
            inter += (y && z) as usize;
            nt += y as usize;
            np += z as usize;
        }
        if t == p {
            exact += 1;
        }
        if nt == 0 && np == 0 {
            acc += 1.0;
            prec += 1.0;
            rec += 1.0;
            f1 += 1.0;
        } else {
            acc += ratio(inter, nt + np - inter);
            prec += ratio(inter, np);
            rec += ratio(inter, nt);
            f1 += ratio(2 * inter, nt + np);
        }
    }
    let nf = n as f64;
    let mut report = MeasureReport {
        counts,
        ..Default::default()
    };
    for (name, v) in [
        ("hamming_loss", wrong as f64 / (n * l) as f64),
        ("subset_accuracy", exact as f64 / nf),
        ("accuracy.example-based", acc / nf),
        ("precision.example-based", prec / nf),
        ("recall.example-based", rec / nf),
        ("F1.example-based", f1 / nf),
    ] {
        report.values.insert(name.to_string(), v);
    }
    Ok(report)
}

/// Micro (pooled counts) and macro (unweighted per-label mean) precision,
/// recall and F1. Per-label 0/0 counts as 0.
pub fn label_based(truth: &Array2<bool>, pred: &Array2<bool>) -> Result<MeasureReport> {
    let counts = contingency(truth, pred)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let (mut p_sum, mut r_sum, mut f_sum) = (0.0, 0.0, 0.0);
    for c in &counts {
        tp += c.tp;
        fp += c.fp;
        fn_ += c.fn_;
        p_sum += ratio(c.tp, c.tp + c.fp);
        r_sum += ratio(c.tp, c.tp + c.fn_);
        f_sum += ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_);
    }
    let l = counts.len() as f64;
    let mut report = MeasureReport::default();
    for (name, v) in [
        ("precision.micro", ratio(tp, tp + fp)),
        ("recall.micro", ratio(tp, tp + fn_)),
        ("F1.micro", ratio(2 * tp, 2 * tp + fp + fn_)),
        ("precision.macro", p_sum / l),
        ("recall.macro", r_sum / l),
        ("F1.macro", f_sum / l),
    ] {
        report.values.insert(name.to_string(), v);
    }
    report.counts = counts;
    Ok(report)
}
