//! Hamiltonian model learning.
//!
//! Candidate Hamiltonian models are trained against a (simulated) target
//! system with sequential Monte Carlo, compared through Bayes factors and
//! searched either over a prescribed set of lattices or with a genetic
//! algorithm driven by Bayes-factor Elo ratings.
//!
//! Module map:
//!
//! - [`hamiltonian`]: dense complex linear algebra, Pauli strings,
//!   Jordan-Wigner ladder operators and lattice model families.
//! - [`modelspace`]: term labels, models, chromosomes and F1 metrics.
//! - [`qhl`]: particle clouds, experiment design and parameter learning.
//! - [`comparison`]: Bayes factors, points and comparison graphs.
//! - [`objectives`]: fitness functions including the Elo rating engine.
//! - [`exploration`]: fixed-set, family-forest and genetic strategies.
//! - [`orchestrator`]: run configuration, the search engine and the ledger.

pub mod comparison;
pub mod error;
pub mod exploration;
pub mod hamiltonian;
pub mod modelspace;
pub mod objectives;
pub mod orchestrator;
pub mod qhl;
pub mod rng;

pub use error::{QmlaError, Result};
