//! Sequential Monte Carlo parameter learning: priors, particle clouds,
//! experiment design, simulated measurements and likelihood bookkeeping.

pub mod cloud;
pub mod experiment;
pub mod learner;
pub mod prior;
pub mod probes;
pub mod simulator;

pub use cloud::ParticleCloud;
pub use experiment::{design_experiment, mpgh_time, Experiment, ExperimentRecord, T_CAP};
pub use learner::{
    bayes_update, mean_residual, particle_likelihood, residuals, total_log_likelihood, train, LogLikelihood,
    QhlConfig, TraceRow, TrainingResult, LN_FLOOR,
};
pub use prior::{ParamPrior, Prior};
pub use probes::{ProbeSet, DEFAULT_PROBE_COUNT};
pub use simulator::{ModelOperator, Target};
