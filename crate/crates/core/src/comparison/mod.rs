//! Pairwise Bayes factors, comparison graphs and branch consolidation.

pub mod bayes;
pub mod graph;
pub mod points;

pub use bayes::{
    bayes_factor, experiment_set, score, tll_stream_labels, Candidate, ComparisonRecord, ComparisonStrategy,
    EvalSettings,
};
pub use graph::{build_comparison_graph, ComparisonGraph};
pub use points::{bf_points, champion, Standing};
