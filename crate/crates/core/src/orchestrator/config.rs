use serde::{Deserialize, Serialize};

use crate::error::{QmlaError, Result};
use crate::exploration::{GeneMapSpec, StrategyConfig};
use crate::hamiltonian::{Family, LatticeSpec};
use crate::modelspace::{lattice_to_model, Chromosome, Model, Term};
use crate::qhl::{ParamPrior, Prior, QhlConfig, DEFAULT_PROBE_COUNT};
use crate::rng::{stream, tag};

pub const SCHEMA_VERSION: u32 = 1;

/// The simulated system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TruthSpec {
    Family {
        family: Family,
        lattice: LatticeSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameters: Option<Vec<f64>>,
    },
    Chromosome {
        gene_map: GeneMapSpec,
        chromosome: Chromosome,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameters: Option<Vec<f64>>,
    },
    Terms {
        terms: Vec<Term>,
        n_qubits: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parameters: Option<Vec<f64>>,
    },
}

impl TruthSpec {
    pub fn family(&self) -> Option<Family> {
        match self {
            TruthSpec::Family { family, .. } => Some(*family),
            _ => None,
        }
    }

    /// Model structure, without parameters.
    pub fn structure(&self) -> Result<Model> {
        match self {
            TruthSpec::Family { family, lattice, .. } => lattice_to_model(*family, lattice),
            TruthSpec::Chromosome { gene_map, chromosome, .. } => gene_map.build()?.decode(chromosome),
            TruthSpec::Terms { terms, n_qubits, .. } => Model::new(terms.clone(), *n_qubits),
        }
    }

    fn pinned(&self) -> Option<&Vec<f64>> {
        match self {
            TruthSpec::Family { parameters, .. }
            | TruthSpec::Chromosome { parameters, .. }
            | TruthSpec::Terms { parameters, .. } => parameters.as_ref(),
        }
    }

    /// Fully parameterised true model: pinned parameters if given, else a
    /// draw from `prior` on a stream derived from `seed`.
    pub fn build(&self, seed: u64, prior: &ParamPrior) -> Result<Model> {
        let model = self.structure()?;
        if model.cardinality() == 0 {
            return Err(QmlaError::Config("true model has no terms".into()));
        }
        let params = match self.pinned() {
            Some(p) => p.clone(),
            None => {
                let prior = Prior::repeat(*prior, model.cardinality())?;
                prior.sample(&mut stream(seed, &[tag("truth")]))
            }
        };
        model.with_parameters(params)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationConfig {
    #[serde(default = "default_validation_n")]
    pub n_experiments: usize,
    #[serde(default = "default_t_min")]
    pub t_min: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
}

fn default_validation_n() -> usize {
    100
}
fn default_t_min() -> f64 {
    0.1
}
fn default_t_max() -> f64 {
    10.0
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            n_experiments: default_validation_n(),
            t_min: default_t_min(),
            t_max: default_t_max(),
        }
    }
}

fn default_probe_count() -> usize {
    DEFAULT_PROBE_COUNT
}

fn default_qhl() -> QhlConfig {
    QhlConfig::new(100, 500)
}

/// Complete, declarative description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub truth: TruthSpec,
    pub strategies: Vec<StrategyConfig>,
    #[serde(default = "default_qhl")]
    pub qhl: QhlConfig,
    #[serde(default)]
    pub prior: ParamPrior,
    #[serde(default)]
    pub validation: ValidationConfig,
    #[serde(default = "default_probe_count")]
    pub n_probes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(seed: u64, truth: TruthSpec, strategies: Vec<StrategyConfig>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed,
            truth,
            strategies,
            qhl: default_qhl(),
            prior: ParamPrior::default(),
            validation: ValidationConfig::default(),
            n_probes: DEFAULT_PROBE_COUNT,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(QmlaError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.strategies.is_empty() {
            return Err(QmlaError::Config("no strategies configured".into()));
        }
        for s in &self.strategies {
            s.validate()?;
        }
        self.qhl.validate()?;
        self.prior.validate()?;
        let v = &self.validation;
        if v.n_experiments == 0 || !(v.t_min > 0.0 && v.t_min < v.t_max) {
            return Err(QmlaError::Config(format!(
                "validation needs n_experiments > 0 and 0 < t_min < t_max, got {v:?}"
            )));
        }
        if self.n_probes == 0 {
            return Err(QmlaError::Config("n_probes must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(QmlaError::Config("workers must be positive".into()));
        }
        let truth = self.truth.structure()?;
        if let Some(p) = self.truth.pinned() {
            if p.len() != truth.cardinality() {
                return Err(QmlaError::Config(format!(
                    "true model has {} terms but {} parameters",
                    truth.cardinality(),
                    p.len()
                )));
            }
        }
        Ok(())
    }

    pub fn max_qubits(&self) -> Result<usize> {
        let mut q = self.truth.structure()?.n_qubits();
        for s in &self.strategies {
            q = q.max(s.max_qubits()?);
        }
        Ok(q)
    }
}
