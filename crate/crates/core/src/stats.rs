//! Small statistical helpers shared by the feature, tree and pipeline code.
//! Moments use population normalization; constant samples yield 0 for
//! skewness and kurtosis.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn is_constant(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Population variance; exactly 0 for constant samples.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 || is_constant(xs) {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

fn central_moments(xs: &[f64]) -> Option<(f64, f64, f64)> {
    if xs.len() < 2 || is_constant(xs) {
        return None;
    }
    let m = mean(xs);
    let n = xs.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    Some((m2 / n, m3 / n, m4 / n))
}

pub fn skewness(xs: &[f64]) -> f64 {
    match central_moments(xs) {
        Some((m2, m3, _)) => m3 / m2.powf(1.5),
        None => 0.0,
    }
}

/// Excess kurtosis (normal distribution = 0).
pub fn kurtosis(xs: &[f64]) -> f64 {
    match central_moments(xs) {
        // m4 >= m2^2 always; rounding can dip below the bound
        Some((m2, _, m4)) => (m4 / (m2 * m2) - 3.0).max(-2.0),
        None => 0.0,
    }
}

/// Standard deviation over mean; 0 when the mean is 0.
pub fn coefficient_of_variation(xs: &[f64]) -> f64 {
    let m = mean(xs);
    if m == 0.0 {
        0.0
    } else {
        std_dev(xs) / m
    }
}

/// Shannon entropy in bits of a frequency table.
pub fn entropy_of_counts<I: IntoIterator<Item = usize>>(counts: I) -> f64 {
    let counts: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: usize = counts.iter().sum();
    if total == 0 || counts.len() < 2 {
        return 0.0;
    }
    let t = total as f64;
    -counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Entropy in bits of a binary variable with `positives` of `n`.
pub fn binary_entropy(positives: usize, n: usize) -> f64 {
    entropy_of_counts([positives, n - positives])
}

/// Quantile with linear interpolation between order statistics
/// (position `q·(n−1)` in the sorted sample).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Upper-tail probability P(F > f) of the F distribution.
pub fn f_upper_tail(f: f64, df1: f64, df2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let dist = FisherSnedecor::new(df1, df2).expect("positive degrees of freedom");
    dist.sf(f)
}

/// Critical value of the 1-dof chi-square distribution at significance `alpha`.
pub fn chi_square_critical(alpha: f64) -> f64 {
    ChiSquared::new(1.0)
        .expect("one degree of freedom")
        .inverse_cdf(1.0 - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kurtosis_respects_lower_bound() {
        for k in 1..200 {
            let a = k as f64 * 0.37;
            assert!(kurtosis(&[a, -a, a, -a, a, -a]) >= -2.0);
            assert!(kurtosis(&[0.1 * k as f64, 0.3]) >= -2.0);
        }
    }

    #[test]
    fn moments_of_known_samples() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert_eq!(variance(&xs), 1.25);
        assert!(skewness(&xs).abs() < 1e-15);
        // m4 = 2.5625, m2^2 = 1.5625
        assert!((kurtosis(&xs) - (2.5625 / 1.5625 - 3.0)).abs() < 1e-12);
        let c = [0.1, 0.1, 0.1];
        assert_eq!((variance(&c), skewness(&c), kurtosis(&c)), (0.0, 0.0, 0.0));
    }

    #[test]
    fn entropies() {
        assert_eq!(entropy_of_counts([3, 3, 3, 3]), 2.0);
        assert_eq!(binary_entropy(5, 10), 1.0);
        assert_eq!(binary_entropy(0, 10), 0.0);
    }

    #[test]
    fn chi_square_critical_at_one_percent() {
        assert!((chi_square_critical(0.01) - 6.634897).abs() < 1e-6);
    }

    #[test]
    fn quantiles_interpolate() {
        let s = [-0.1, 0.0, 0.1];
        assert_eq!(quantile(&s, 0.5), 0.0);
        assert!((quantile(&[1.0, 2.0, 3.0, 4.0], 0.25) - 1.75).abs() < 1e-15);
    }
}
