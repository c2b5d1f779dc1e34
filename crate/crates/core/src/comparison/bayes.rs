use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QmlaError, Result};
use crate::modelspace::Model;
use crate::qhl::{total_log_likelihood, ExperimentRecord, LogLikelihood, ModelOperator, ProbeSet, TrainingResult};
use crate::rng::{stable_hash, stream, tag};

/// Which experiments both models are scored on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonStrategy {
    /// Both training sets in full.
    Union,
    /// Latter half of each training set.
    #[default]
    BurnIn,
    /// A shared, fixed validation set.
    Validation,
}

impl fmt::Display for ComparisonStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonStrategy::Union => "union",
            ComparisonStrategy::BurnIn => "burn-in",
            ComparisonStrategy::Validation => "validation",
        })
    }
}

impl FromStr for ComparisonStrategy {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(Self::Union),
            "burn-in" => Ok(Self::BurnIn),
            "validation" => Ok(Self::Validation),
            other => Err(QmlaError::Config(format!("unknown comparison strategy {other:?}"))),
        }
    }
}

/// Outcome of one pairwise comparison; `log_bf = ln B_ij = tll_i − tll_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub i: usize,
    pub j: usize,
    pub strategy: ComparisonStrategy,
    pub tll_i: f64,
    pub tll_j: f64,
    pub log_bf: f64,
    pub n_experiments: usize,
    pub floored_i: usize,
    pub floored_j: usize,
}

impl ComparisonRecord {
    pub fn from_tlls(i: usize, j: usize, strategy: ComparisonStrategy, tll_i: f64, tll_j: f64) -> Self {
        Self {
            i,
            j,
            strategy,
            tll_i,
            tll_j,
            log_bf: tll_i - tll_j,
            n_experiments: 0,
            floored_i: 0,
            floored_j: 0,
        }
    }

    pub fn log10_bf(&self) -> f64 {
        self.log_bf / std::f64::consts::LN_10
    }

    /// Id of the favoured model, `None` when `B_ij = 1`.
    pub fn winner(&self) -> Option<usize> {
        if self.log_bf > 0.0 {
            Some(self.i)
        } else if self.log_bf < 0.0 {
            Some(self.j)
        } else {
            None
        }
    }

    /// The same comparison seen from the other side.
    pub fn swapped(&self) -> Self {
        Self {
            i: self.j,
            j: self.i,
            strategy: self.strategy,
            tll_i: self.tll_j,
            tll_j: self.tll_i,
            log_bf: self.tll_j - self.tll_i,
            n_experiments: self.n_experiments,
            floored_i: self.floored_j,
            floored_j: self.floored_i,
        }
    }
}

/// A trained model as seen by the comparison code.
#[derive(Clone, Copy)]
pub struct Candidate<'a> {
    pub id: usize,
    pub model: &'a Model,
    pub op: &'a ModelOperator,
    pub training: &'a TrainingResult,
}

/// Settings shared by every likelihood evaluation of a run.
#[derive(Clone, Copy, Debug)]
pub struct EvalSettings<'a> {
    pub seed: u64,
    pub probes: &'a ProbeSet,
    pub eval_particles: usize,
    pub resample_a: f64,
}

fn latter_half(records: &[ExperimentRecord]) -> &[ExperimentRecord] {
    &records[records.len() / 2..]
}

/// Experiments both candidates are scored on. The pair is put in key
/// order first, so the list does not depend on argument order.
pub fn experiment_set(
    strategy: ComparisonStrategy,
    a: &Candidate,
    b: &Candidate,
    validation: &[ExperimentRecord],
) -> Result<Vec<ExperimentRecord>> {
    let (first, second) = if a.model.key() <= b.model.key() { (a, b) } else { (b, a) };
    let set: Vec<ExperimentRecord> = match strategy {
        ComparisonStrategy::Union => first
            .training
            .experiments
            .iter()
            .chain(&second.training.experiments)
            .copied()
            .collect(),
        ComparisonStrategy::BurnIn => latter_half(&first.training.experiments)
            .iter()
            .chain(latter_half(&second.training.experiments))
            .copied()
            .collect(),
        ComparisonStrategy::Validation => validation.to_vec(),
    };
    if set.is_empty() {
        return Err(QmlaError::EmptyExperiments);
    }
    Ok(set)
}

/// Random-stream labels for scoring `model` within a comparison. Validation
/// scores depend on the model alone and can be cached.
pub fn tll_stream_labels(strategy: ComparisonStrategy, model: &Model, a: &Model, b: &Model) -> Vec<u64> {
    let key = stable_hash(model.key().as_bytes());
    match strategy {
        ComparisonStrategy::Validation => vec![tag("tll:validation"), key],
        _ => {
            let (ka, kb) = (stable_hash(a.key().as_bytes()), stable_hash(b.key().as_bytes()));
            vec![tag("tll"), tag(&strategy.to_string()), key, ka.min(kb), ka.max(kb)]
        }
    }
}

/// Total log-likelihood of one candidate on `experiments`.
pub fn score(
    candidate: &Candidate,
    experiments: &[ExperimentRecord],
    labels: &[u64],
    settings: &EvalSettings,
) -> Result<LogLikelihood> {
    let mut rng = stream(settings.seed, labels);
    total_log_likelihood(
        candidate.op,
        settings.probes,
        &candidate.training.cloud,
        experiments,
        settings.eval_particles,
        settings.resample_a,
        &mut rng,
    )
}

/// Bayes factor between two trained candidates.
pub fn bayes_factor(
    a: &Candidate,
    b: &Candidate,
    strategy: ComparisonStrategy,
    validation: &[ExperimentRecord],
    settings: &EvalSettings,
) -> Result<ComparisonRecord> {
    let set = experiment_set(strategy, a, b, validation)?;
    let la = score(a, &set, &tll_stream_labels(strategy, a.model, a.model, b.model), settings)?;
    let lb = score(b, &set, &tll_stream_labels(strategy, b.model, a.model, b.model), settings)?;
    Ok(ComparisonRecord {
        n_experiments: set.len(),
        floored_i: la.floored,
        floored_j: lb.floored,
        ..ComparisonRecord::from_tlls(a.id, b.id, strategy, la.tll, lb.tll)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ninety_nat_example() {
        let r = ComparisonRecord::from_tlls(1, 2, ComparisonStrategy::Union, -10.0, -100.0);
        assert!((r.log_bf - 90.0).abs() < 1e-12);
        assert_eq!(r.winner(), Some(1));
        assert_eq!(r.swapped().log_bf, -r.log_bf);
    }

    #[test]
    fn strategy_strings() {
        for s in [ComparisonStrategy::Union, ComparisonStrategy::BurnIn, ComparisonStrategy::Validation] {
            assert_eq!(s.to_string().parse::<ComparisonStrategy>().unwrap(), s);
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{s}\""));
        }
    }
}
