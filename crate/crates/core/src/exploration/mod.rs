//! Exploration strategies: fixed lattice sets, family forests and the
//! genetic algorithm.

pub mod fixed;
pub mod genetic;
pub mod strategy;

pub use fixed::{fixed_set_generate, FixedSet};
pub use genetic::{
    crossover, crossover_at, crossover_point, ga_generate, ga_terminate, initial_generation, mutate,
    roulette_select_pair, GaConfig,
};
pub use strategy::{GeneMapSpec, StrategyConfig};
