use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{QmlaError, Result};

const MAX_REJECTIONS: usize = 100_000;

/// Distribution of one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ParamPrior {
    /// Normal, truncated to the open interval `(lower, upper)`.
    Normal {
        mean: f64,
        std: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        upper: Option<f64>,
    },
    Uniform { lo: f64, hi: f64 },
}

impl Default for ParamPrior {
    fn default() -> Self {
        ParamPrior::Normal {
            mean: 0.5,
            std: 0.15,
            lower: Some(0.0),
            upper: Some(1.0),
        }
    }
}

impl ParamPrior {
    pub fn normal(mean: f64, std: f64) -> Self {
        ParamPrior::Normal {
            mean,
            std,
            lower: None,
            upper: None,
        }
    }

    pub fn truncated_normal(mean: f64, std: f64, lower: f64, upper: f64) -> Self {
        ParamPrior::Normal {
            mean,
            std,
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    fn bounds(lower: Option<f64>, upper: Option<f64>) -> (f64, f64) {
        (lower.unwrap_or(f64::NEG_INFINITY), upper.unwrap_or(f64::INFINITY))
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        ParamPrior::Uniform { lo, hi }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ParamPrior::Normal { mean, std, lower, upper } => {
                if !(std > 0.0 && std.is_finite() && mean.is_finite()) {
                    return Err(QmlaError::Config(format!("normal prior needs finite mean and std > 0, got {std}")));
                }
                let (lower, upper) = Self::bounds(lower, upper);
                if !(lower < upper) {
                    return Err(QmlaError::Config(format!("truncation bounds {lower} >= {upper}")));
                }
            }
            ParamPrior::Uniform { lo, hi } => {
                if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                    return Err(QmlaError::Config(format!("uniform prior needs lo < hi, got ({lo}, {hi})")));
                }
            }
        }
        Ok(())
    }

    /// Draws one value. Truncated normals use rejection sampling; if the
    /// accepted region is too improbable the draw is clamped into it.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ParamPrior::Normal { mean, std, lower, upper } => {
                let (lower, upper) = Self::bounds(lower, upper);
                let n = Normal::new(mean, std).expect("validated prior");
                for _ in 0..MAX_REJECTIONS {
                    let x = n.sample(rng);
                    if x > lower && x < upper {
                        return x;
                    }
                }
                mean.clamp(lower, upper)
            }
            ParamPrior::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }

    /// Mean and standard deviation of the untruncated distribution.
    pub fn nominal_moments(&self) -> (f64, f64) {
        match *self {
            ParamPrior::Normal { mean, std, .. } => (mean, std),
            ParamPrior::Uniform { lo, hi } => (0.5 * (lo + hi), (hi - lo) / 12f64.sqrt()),
        }
    }
}

/// Independent per-parameter priors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prior {
    params: Vec<ParamPrior>,
}

impl Prior {
    pub fn new(params: Vec<ParamPrior>) -> Result<Self> {
        for p in &params {
            p.validate()?;
        }
        Ok(Self { params })
    }

    pub fn repeat(p: ParamPrior, k: usize) -> Result<Self> {
        Self::new(vec![p; k])
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[ParamPrior] {
        &self.params
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.params.iter().map(|p| p.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn default_is_truncated_to_unit_interval() {
        let p = ParamPrior::default();
        let mut rng = stream(1, &[]);
        for _ in 0..20_000 {
            let x = p.sample(&mut rng);
            assert!(x > 0.0 && x < 1.0);
        }
    }

    #[test]
    fn uniform_mean() {
        let p = ParamPrior::uniform(0.0, 1.0);
        let mut rng = stream(2, &[]);
        let n = 10_000;
        let mean = (0..n).map(|_| p.sample(&mut rng)).sum::<f64>() / n as f64;
        let sigma = 1.0 / 12f64.sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma / (n as f64).sqrt());
    }

    #[test]
    fn validation() {
        assert!(ParamPrior::normal(0.0, 0.0).validate().is_err());
        assert!(ParamPrior::uniform(1.0, 1.0).validate().is_err());
        assert!(ParamPrior::truncated_normal(0.5, 0.1, 1.0, 0.0).validate().is_err());
        assert!(Prior::repeat(ParamPrior::default(), 3).is_ok());
    }

    #[test]
    fn serde_form() {
        let p: ParamPrior = serde_json::from_str(r#"{"kind":"uniform","lo":0,"hi":1}"#).unwrap();
        assert_eq!(p, ParamPrior::uniform(0.0, 1.0));
        let n: ParamPrior = serde_json::from_str(r#"{"kind":"normal","mean":0.5,"std":0.1}"#).unwrap();
        assert_eq!(n, ParamPrior::normal(0.5, 0.1));
    }
}
