//! Bayes-factor-weighted Elo ratings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const INITIAL_RATING: f64 = 1000.0;
const SCALE: f64 = 400.0;
/// Bound on `|log₁₀ B|` used as the update weight.
pub const LOG10_BF_CLAMP: f64 = 300.0;

/// Expected score of `i` against `j`.
pub fn expected_score(r_i: f64, r_j: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf((r_j - r_i) / SCALE))
}

/// Ratings after `i` and `j` are compared with `log₁₀ B_ij`.
///
/// The winner is `i` when `B_ij > 1`. Points move from loser to winner with
/// weight `η = |log₁₀ B_ij|`, so the pair's total is conserved.
pub fn elo_update(r_i: f64, r_j: f64, log10_bf: f64) -> (f64, f64) {
    let l = log10_bf.clamp(-LOG10_BF_CLAMP, LOG10_BF_CLAMP);
    if l == 0.0 || l.is_nan() {
        return (r_i, r_j);
    }
    let s_i = if l > 0.0 { 1.0 } else { 0.0 };
    let delta = l.abs() * (s_i - expected_score(r_i, r_j));
    (r_i + delta, r_j - delta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EloUpdate {
    pub i: usize,
    pub j: usize,
    pub log10_bf: f64,
    pub delta_i: f64,
}

/// Ratings of one generation; every model starts at the same rating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EloState {
    initial: f64,
    ratings: BTreeMap<usize, f64>,
    log: Vec<EloUpdate>,
}

impl EloState {
    pub fn new(ids: impl IntoIterator<Item = usize>, initial: f64) -> Self {
        Self {
            initial,
            ratings: ids.into_iter().map(|id| (id, initial)).collect(),
            log: Vec::new(),
        }
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn rating(&self, id: usize) -> Option<f64> {
        self.ratings.get(&id).copied()
    }

    pub fn ratings(&self) -> &BTreeMap<usize, f64> {
        &self.ratings
    }

    pub fn log(&self) -> &[EloUpdate] {
        &self.log
    }

    pub fn total(&self) -> f64 {
        self.ratings.values().sum()
    }

    /// Applies one comparison. Unknown ids are ignored.
    pub fn apply(&mut self, i: usize, j: usize, log10_bf: f64) {
        let (Some(&r_i), Some(&r_j)) = (self.ratings.get(&i), self.ratings.get(&j)) else {
            return;
        };
        let (n_i, n_j) = elo_update(r_i, r_j, log10_bf);
        self.ratings.insert(i, n_i);
        self.ratings.insert(j, n_j);
        self.log.push(EloUpdate {
            i,
            j,
            log10_bf,
            delta_i: n_i - r_i,
        });
    }

    /// `R_i − R_min` for every model.
    pub fn fitness(&self) -> BTreeMap<usize, f64> {
        let min = self.ratings.values().copied().fold(f64::INFINITY, f64::min);
        self.ratings.iter().map(|(&id, &r)| (id, r - min)).collect()
    }
}

/// `R_i − min_j R_j`.
pub fn g_elo(ratings: &[f64]) -> Vec<f64> {
    let min = ratings.iter().copied().fold(f64::INFINITY, f64::min);
    ratings.iter().map(|r| r - min).collect()
}
