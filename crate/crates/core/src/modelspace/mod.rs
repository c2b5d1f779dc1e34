//! Term alphabets, models, chromosome encoding and classification metrics.

pub mod genes;
pub mod metrics;
pub mod model;
pub mod terms;

pub use genes::{Chromosome, GeneMap};
pub use metrics::{f1_metrics, f1_score, F1Metrics};
pub use model::{lattice_to_model, Model};
pub use terms::{Term, TermLabel};
