//! Fitness functions for ranking models within a generation.

pub mod criteria;
pub mod elo;
pub mod selection;

pub use criteria::{
    aic, aicc, akaike_weight, bayes_weight, bic, g_aicc, g_bic, g_inverse_ll, g_rank, g_residual, FITNESS_CAP,
};
pub use elo::{elo_update, expected_score, g_elo, EloState, EloUpdate, INITIAL_RATING, LOG10_BF_CLAMP};
pub use selection::{normalise, truncation_count, FitnessRecord, Objective, RawScores};
