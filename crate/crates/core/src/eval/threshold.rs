use ndarray::Array2;

use crate::{Error, Result};

/// Distinct score values together with 0 and 1, ascending.
pub fn default_grid(scores: &Array2<f64>) -> Vec<f64> {
    let mut grid: Vec<f64> = scores.iter().copied().chain([0.0, 1.0]).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

pub fn apply_threshold(scores: &Array2<f64>, t: f64) -> Array2<bool> {
    scores.mapv(|s| s >= t)
}

/// Mean number of relevant labels per example at threshold `t`.
pub fn predicted_cardinality(scores: &Array2<f64>, t: f64) -> f64 {
    let n = scores.nrows().max(1);
    scores.iter().filter(|&&s| s >= t).count() as f64 / n as f64
}

/// Grid value whose thresholded cardinality is closest to the training
/// cardinality; the first (smallest) of tied values wins.
pub fn pcut_threshold(train_cardinality: f64, scores: &Array2<f64>, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Contract("PCut grid is empty".into()));
    }
    if let Some(w) = grid
        .windows(2)
        .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::Contract(format!("PCut grid not strictly ascending at {}", w[1])));
    }
    if let Some(t) = grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::Contract(format!("PCut grid value {t} outside [0,1]")));
    }
    let mut best = (grid[0], f64::INFINITY);
    for &t in grid {
        let gap = (train_cardinality - predicted_cardinality(scores, t)).abs();
        if gap < best.1 {
            best = (t, gap);
        }
    }
    Ok(best.0)
}
