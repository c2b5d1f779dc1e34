//! Turning per-model scores into fitness and selection probabilities.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::criteria::{aicc, bayes_weight, bic, g_aicc, g_bic, g_inverse_ll, g_rank, g_residual, akaike_weight};
use crate::error::{QmlaError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    Elo,
    InverseLl,
    Aicc,
    AkaikeWeight,
    Bic,
    BayesWeight,
    Points,
    Rank,
    Residual,
}

impl Objective {
    pub const ALL: [Objective; 9] = [
        Objective::Elo,
        Objective::InverseLl,
        Objective::Aicc,
        Objective::AkaikeWeight,
        Objective::Bic,
        Objective::BayesWeight,
        Objective::Points,
        Objective::Rank,
        Objective::Residual,
    ];

    /// Whether the objective needs likelihoods on the shared validation set.
    pub fn needs_validation_tll(self) -> bool {
        matches!(
            self,
            Objective::InverseLl | Objective::Aicc | Objective::AkaikeWeight | Objective::Bic | Objective::BayesWeight
        )
    }

    /// Whether the objective needs all-pairs Bayes factors.
    pub fn needs_all_pairs(self) -> bool {
        matches!(self, Objective::Points | Objective::Rank)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

impl FromStr for Objective {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.to_string() == s)
            .ok_or_else(|| QmlaError::Config(format!("unknown objective {s:?}")))
    }
}

/// Everything an objective may look at for one model.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawScores {
    pub id: usize,
    /// Cardinality `k`.
    pub k: usize,
    /// Sample count `n` behind `tll`.
    pub n: usize,
    pub tll: Option<f64>,
    pub residual: Option<f64>,
    pub points: usize,
    pub log_bf_sum: f64,
    pub rating: Option<f64>,
    /// Eliminated models always score zero.
    pub eliminated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessRecord {
    pub model_id: usize,
    pub raw: RawScores,
    pub fitness: f64,
    pub selection_probability: f64,
}

/// Number of models kept for parent selection.
pub fn truncation_count(n_models: usize, fraction: f64) -> usize {
    ((fraction * n_models as f64).round() as usize).clamp(2.min(n_models), n_models)
}

/// `g / Σg`; uniform when every fitness is zero.
pub fn normalise(g: &[f64]) -> Vec<f64> {
    let total: f64 = g.iter().sum();
    if total > 0.0 && total.is_finite() {
        g.iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / g.len() as f64; g.len()]
    }
}

fn need<T: Copy>(v: Option<T>, what: &str, id: usize) -> Result<T> {
    v.ok_or_else(|| QmlaError::Config(format!("model {id} has no {what} for this objective")))
}

/// Points, then `Σ log B`, then lower id.
pub fn points_order(a: &RawScores, b: &RawScores) -> Ordering {
    b.points
        .cmp(&a.points)
        .then(b.log_bf_sum.total_cmp(&a.log_bf_sum))
        .then(a.id.cmp(&b.id))
}

impl Objective {
    /// Fitness `g ≥ 0` of every model, in input order. `keep` is the
    /// post-truncation pool size, used by the rank objective.
    pub fn fitness(self, raws: &[RawScores], keep: usize) -> Result<Vec<f64>> {
        let live = |r: &RawScores, g: f64| if r.eliminated { 0.0 } else { g.max(0.0) };
        let g: Vec<f64> = match self {
            Objective::Elo => {
                let ratings: Vec<f64> = raws.iter().map(|r| need(r.rating, "rating", r.id)).collect::<Result<_>>()?;
                let min = ratings.iter().copied().fold(f64::INFINITY, f64::min);
                raws.iter().zip(&ratings).map(|(r, x)| live(r, x - min)).collect()
            }
            Objective::InverseLl => raws
                .iter()
                .map(|r| Ok(live(r, g_inverse_ll(need(r.tll, "log-likelihood", r.id)?))))
                .collect::<Result<_>>()?,
            Objective::Aicc => raws
                .iter()
                .map(|r| Ok(live(r, g_aicc(need(r.tll, "log-likelihood", r.id)?, r.k, r.n)?)))
                .collect::<Result<_>>()?,
            Objective::Bic => raws
                .iter()
                .map(|r| Ok(live(r, g_bic(need(r.tll, "log-likelihood", r.id)?, r.k, r.n)?)))
                .collect::<Result<_>>()?,
            Objective::AkaikeWeight => {
                let a: Vec<f64> = raws
                    .iter()
                    .map(|r| aicc(need(r.tll, "log-likelihood", r.id)?, r.k, r.n))
                    .collect::<Result<_>>()?;
                let min = a.iter().copied().fold(f64::INFINITY, f64::min);
                raws.iter().zip(&a).map(|(r, &x)| live(r, akaike_weight(x, min))).collect()
            }
            Objective::BayesWeight => {
                // exp(−BIC/2) relative to the best model; same selection
                // probabilities as the absolute weights, without underflow
                let b: Vec<f64> = raws
                    .iter()
                    .map(|r| bic(need(r.tll, "log-likelihood", r.id)?, r.k, r.n))
                    .collect::<Result<_>>()?;
                let min = b.iter().copied().fold(f64::INFINITY, f64::min);
                raws.iter().zip(&b).map(|(r, &x)| live(r, bayes_weight(x - min))).collect()
            }
            Objective::Points => raws.iter().map(|r| live(r, r.points as f64)).collect(),
            Objective::Rank => {
                let mut order: Vec<usize> = (0..raws.len()).collect();
                order.sort_by(|&a, &b| points_order(&raws[a], &raws[b]));
                let mut g = vec![0.0; raws.len()];
                for (pos, &i) in order.iter().enumerate() {
                    g[i] = live(&raws[i], g_rank(pos + 1, keep));
                }
                g
            }
            Objective::Residual => raws
                .iter()
                .map(|r| Ok(live(r, g_residual(&[need(r.residual, "residual", r.id)?]))))
                .collect::<Result<_>>()?,
        };
        Ok(g)
    }
}
