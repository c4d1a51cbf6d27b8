use crate::stats::f_upper_tail;

/// F statistic of a binary split with df (1, n - 2).
pub fn f_statistic(ss_parent: f64, ss_children: f64, n: usize) -> f64 {
    (ss_parent - ss_children) / (ss_children / (n as f64 - 2.0))
}

/// Accepts a binary split when the F-test p-value is at most `level`.
/// Needs more than two rows; a split of a zero-variance node is rejected
/// and a perfect split of a non-trivial node is accepted.
pub fn ftest_accept(ss_parent: f64, ss_children: f64, n: usize, level: f64) -> bool {
    if n <= 2 || ss_parent <= 0.0 {
        return false;
    }
    if ss_children <= 0.0 {
        return true;
    }
    let f = f_statistic(ss_parent, ss_children, n);
    if f.is_nan() || f <= 0.0 {
        return false;
    }
    f_upper_tail(f, 1.0, n as f64 - 2.0) <= level
}
