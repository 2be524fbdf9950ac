use crate::{Error, Result};

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, never on how the work was scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    /// `s/√n`; absent for a single sample.
    pub std_error: Option<f64>,
    pub n: usize,
}

/// Sample mean and its standard error (unbiased sample variance).
pub fn mc_mean(values: &[f64]) -> Result<MeanEstimate> {
    if values.is_empty() {
        return Err(Error::invalid("values", "cannot average an empty sample"));
    }
    let n = values.len();
    let mean = pairwise_sum(values) / n as f64;
    let std_error = (n > 1).then(|| {
        let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        (var / n as f64).sqrt()
    });
    Ok(MeanEstimate { mean, std_error, n })
}

/// Empirical quantiles at each `p` of `quantile_grid`, by linear
/// interpolation between order statistics at position `p·(n−1)`.
pub fn empirical_cdf(values: &[f64], quantile_grid: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::invalid(
            "values",
            "cannot take quantiles of an empty sample",
        ));
    }
    if let Some(p) = quantile_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::invalid(
            "quantile_grid",
            format!("{p} is outside [0, 1]"),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = sorted.len() - 1;
    Ok(quantile_grid
        .iter()
        .map(|&p| {
            let pos = p * last as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(last);
            let frac = pos - lo as f64;
            sorted[lo] + (sorted[hi] - sorted[lo]) * frac
        })
        .collect())
}

/// `0.01, 0.02, …, 0.99`.
pub fn default_quantile_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

/// `√(a² + b²)` for two independent standard errors.
pub fn pooled_se(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mean_examples() {
        let m = mc_mean(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((m.mean, m.std_error), (1.0, Some(0.0)));
        let m = mc_mean(&[0.0, 1.0]).unwrap();
        assert_eq!(m.mean, 0.5);
        assert!((m.std_error.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(mc_mean(&[3.0]).unwrap().std_error, None);
        assert!(mc_mean(&[]).is_err());
    }

    #[test]
    fn pairwise_matches_naive_sum() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&v), 249750.0);
    }

    #[test]
    fn cdf_examples() {
        let q = empirical_cdf(&[3.0, 1.0, 2.0, 4.0], &[0.0, 0.5, 1.0, 1.0 / 3.0]).unwrap();
        assert_eq!(q, vec![1.0, 2.5, 4.0, 2.0]);
        assert_eq!(empirical_cdf(&[7.0], &[0.3]).unwrap(), vec![7.0]);
        assert!(empirical_cdf(&[], &[0.5]).is_err());
        assert!(empirical_cdf(&[1.0], &[1.5]).is_err());
    }

    #[test]
    fn uniform_median() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let v: Vec<f64> = (0..1_000_000).map(|_| rng.random::<f64>()).collect();
        let med = empirical_cdf(&v, &[0.5]).unwrap()[0];
        assert!((med - 0.5).abs() <= 0.002);
    }

    #[test]
    fn grid_shape() {
        let g = default_quantile_grid();
        assert_eq!(g.len(), 99);
        assert_eq!(g[49], 0.5);
    }
}
