//! Likelihood- and information-criterion-based fitness functions.

use crate::error::{QmlaError, Result};

/// Returned in place of `1/0` when a likelihood or criterion is exactly zero.
pub const FITNESS_CAP: f64 = 1e9;

fn inverse_or_cap(x: f64) -> f64 {
    if x == 0.0 {
        FITNESS_CAP
    } else {
        1.0 / x
    }
}

/// `−1 / TLL`.
pub fn g_inverse_ll(tll: f64) -> f64 {
    inverse_or_cap(-tll).min(FITNESS_CAP)
}

pub fn aic(tll: f64, k: usize) -> f64 {
    2.0 * k as f64 - 2.0 * tll
}

/// Small-sample corrected AIC; needs `n > k + 1`.
pub fn aicc(tll: f64, k: usize, n: usize) -> Result<f64> {
    if n <= k + 1 {
        return Err(QmlaError::TooFewSamples { n, k });
    }
    let kf = k as f64;
    Ok(aic(tll, k) + 2.0 * kf * (kf + 1.0) / (n - k - 1) as f64)
}

/// `(1 / AICc)²`.
pub fn g_aicc(tll: f64, k: usize, n: usize) -> Result<f64> {
    Ok(inverse_or_cap(aicc(tll, k, n)?).powi(2).min(FITNESS_CAP))
}

pub fn akaike_weight(aicc: f64, aicc_min: f64) -> f64 {
    ((aicc_min - aicc) / 2.0).exp()
}

pub fn bic(tll: f64, k: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(QmlaError::TooFewSamples { n, k });
    }
    Ok(k as f64 * (n as f64).ln() - 2.0 * tll)
}

/// `(1 / BIC)²`.
pub fn g_bic(tll: f64, k: usize, n: usize) -> Result<f64> {
    Ok(inverse_or_cap(bic(tll, k, n)?).powi(2).min(FITNESS_CAP))
}

/// `exp(−BIC / 2)`.
pub fn bayes_weight(bic: f64) -> f64 {
    (-bic / 2.0).exp()
}

/// `(1 − mean r)²` over per-experiment mean residuals.
pub fn g_residual(residuals: &[f64]) -> f64 {
    if residuals.is_empty() {
        return 0.0;
    }
    let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
    (1.0 - mean).powi(2)
}

/// Rank-based fitness for the `keep` best models: rank `R` (1 = best)
/// scores `(keep − R + 1) / Σ_{n=1}^{keep} n`.
pub fn g_rank(rank: usize, keep: usize) -> f64 {
    if rank == 0 || rank > keep {
        return 0.0;
    }
    let total = (keep * (keep + 1)) as f64 / 2.0;
    (keep - rank + 1) as f64 / total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_ll() {
        assert!((g_inverse_ll(-10.0) - 0.1).abs() < 1e-15);
        assert!((g_inverse_ll(-100.0) - 0.01).abs() < 1e-15);
        assert_eq!(g_inverse_ll(0.0), FITNESS_CAP);
        assert!(g_inverse_ll(-5.0) > g_inverse_ll(-6.0));
    }

    #[test]
    fn aicc_example() {
        assert_eq!(aic(-10.0, 2), 24.0);
        let a = aicc(-10.0, 2, 100).unwrap();
        assert!((a - (24.0 + 12.0 / 97.0)).abs() < 1e-12);
        let g = g_aicc(-10.0, 2, 100).unwrap();
        assert!((g - 1.0 / a.powi(2)).abs() < 1e-18);
        assert!((g - 1.7186e-3).abs() < 5e-7);
        assert!(aicc(-10.0, 3, 4).is_err());
        assert_eq!(akaike_weight(a, a), 1.0);
    }

    #[test]
    fn bic_example() {
        let b = bic(-10.0, 2, 100).unwrap();
        assert!((b - 29.2103).abs() < 1e-4);
        assert!((g_bic(-10.0, 2, 100).unwrap() - 1.1720e-3).abs() < 1e-7);
        assert_eq!(bic(-10.0, 0, 100).unwrap(), 20.0);
        assert!(bic(-1.0, 1, 0).is_err());
    }

    #[test]
    fn residual_fitness() {
        assert_eq!(g_residual(&[0.0, 0.0]), 1.0);
        assert_eq!(g_residual(&[1.0, 1.0]), 0.0);
        assert!((g_residual(&[0.2, 0.4]) - 0.49).abs() < 1e-15);
    }

    #[test]
    fn rank_fitness() {
        let g: Vec<f64> = (1..=3).map(|r| g_rank(r, 3)).collect();
        assert_eq!(g, vec![3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0]);
        assert_eq!(g_rank(1, 1), 1.0);
        assert_eq!(g_rank(4, 3), 0.0);
    }

    #[test]
    fn penalties_grow_with_k() {
        for k in 1..10 {
            assert!(g_aicc(-20.0, k, 100).unwrap() < g_aicc(-20.0, k - 1, 100).unwrap());
            assert!(g_bic(-20.0, k, 100).unwrap() < g_bic(-20.0, k - 1, 100).unwrap());
        }
    }
}
