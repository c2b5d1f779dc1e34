//! Append-only run record, written as newline-delimited JSON.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::config::{RunConfig, ValidationConfig};
use crate::comparison::{ComparisonRecord, Standing};
use crate::error::{QmlaError, Result};
use crate::hamiltonian::Family;
use crate::modelspace::Chromosome;
use crate::qhl::{ExperimentRecord, TrainingResult};

/// Where in the search a record was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub strategy: usize,
    pub tree: String,
    pub branch: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub posterior_mean: Vec<f64>,
    pub posterior_cov: Vec<Vec<f64>>,
    pub experiments: Vec<ExperimentRecord>,
    pub likelihoods: Vec<f64>,
    pub resample_count: usize,
    pub prior_resets: usize,
}

impl From<&TrainingResult> for TrainingSummary {
    fn from(r: &TrainingResult) -> Self {
        Self {
            posterior_mean: r.posterior_mean.clone(),
            posterior_cov: r.posterior_cov.clone(),
            experiments: r.experiments.clone(),
            likelihoods: r.likelihoods.clone(),
            resample_count: r.resample_count,
            prior_resets: r.prior_resets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LedgerRecord {
    RunStart {
        schema_version: u32,
        seed: u64,
        truth_key: String,
        truth_terms: Vec<String>,
        truth_parameters: Vec<f64>,
        truth_family: Option<Family>,
        truth_chromosome: Option<Chromosome>,
        n_probes: usize,
        validation: ValidationConfig,
        config: Box<RunConfig>,
    },
    Model {
        id: usize,
        key: String,
        terms: Vec<String>,
        n_qubits: usize,
        family: Option<Family>,
        strategy_kind: String,
        location: Location,
        chromosome: Option<Chromosome>,
    },
    Training {
        model_id: usize,
        key: String,
        reused: bool,
        summary: TrainingSummary,
    },
    Eliminated {
        model_id: usize,
        reason: String,
    },
    Comparison {
        location: Location,
        #[serde(flatten)]
        record: ComparisonRecord,
    },
    Ratings {
        strategy: usize,
        generation: usize,
        model_id: usize,
        chromosome: Option<Chromosome>,
        rating: Option<f64>,
        fitness: f64,
        selection_probability: f64,
    },
    BranchChampion {
        location: Location,
        model_id: usize,
        standings: Vec<Standing>,
    },
    TreeChampion {
        strategy: usize,
        tree: String,
        model_id: usize,
        family: Option<Family>,
    },
    StrategyChampion {
        strategy: usize,
        model_id: usize,
        family: Option<Family>,
    },
    GlobalChampion {
        model_id: usize,
        key: String,
        terms: Vec<String>,
        family: Option<Family>,
        posterior_mean: Vec<f64>,
    },
    PhaseTime {
        phase: String,
        seconds: f64,
    },
}

impl LedgerRecord {
    /// Wall-clock records, the only non-deterministic content.
    pub fn is_timing(&self) -> bool {
        matches!(self, LedgerRecord::PhaseTime { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    records: Vec<LedgerRecord>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: LedgerRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[LedgerRecord] {
        &self.records
    }

    /// Records with timing entries removed.
    pub fn deterministic(&self) -> Vec<&LedgerRecord> {
        self.records.iter().filter(|r| !r.is_timing()).collect()
    }

    pub fn write_ndjson<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_ndjson<R: BufRead>(r: R) -> Result<Self> {
        let mut records = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: LedgerRecord = serde_json::from_str(&line)
                .map_err(|e| QmlaError::Ledger(format!("line {}: {e}", n + 1)))?;
            records.push(rec);
        }
        let ledger = Self { records };
        ledger.check()?;
        Ok(ledger)
    }

    /// Schema and referential checks: a single run start with a supported
    /// schema, and no model id used before it is registered.
    pub fn check(&self) -> Result<()> {
        let mut registered = std::collections::BTreeSet::new();
        match self.records.first() {
            Some(LedgerRecord::RunStart { schema_version, .. }) => {
                if *schema_version != super::config::SCHEMA_VERSION {
                    return Err(QmlaError::Ledger(format!("unsupported schema_version {schema_version}")));
                }
            }
            _ => return Err(QmlaError::Ledger("ledger does not begin with run_start".into())),
        }
        for r in &self.records[1..] {
            let used: Vec<usize> = match r {
                LedgerRecord::RunStart { .. } => return Err(QmlaError::Ledger("second run_start".into())),
                LedgerRecord::Model { id, .. } => {
                    if !registered.insert(*id) {
                        return Err(QmlaError::Ledger(format!("model {id} registered twice")));
                    }
                    vec![]
                }
                LedgerRecord::Training { model_id, .. }
                | LedgerRecord::Eliminated { model_id, .. }
                | LedgerRecord::Ratings { model_id, .. }
                | LedgerRecord::BranchChampion { model_id, .. }
                | LedgerRecord::TreeChampion { model_id, .. }
                | LedgerRecord::StrategyChampion { model_id, .. }
                | LedgerRecord::GlobalChampion { model_id, .. } => vec![*model_id],
                LedgerRecord::Comparison { record, .. } => vec![record.i, record.j],
                LedgerRecord::PhaseTime { .. } => vec![],
            };
            if let Some(id) = used.iter().find(|id| !registered.contains(id)) {
                return Err(QmlaError::UnknownModel(*id));
            }
        }
        Ok(())
    }

    pub fn run_start(&self) -> Option<&LedgerRecord> {
        self.records.iter().find(|r| matches!(r, LedgerRecord::RunStart { .. }))
    }

    pub fn model(&self, id: usize) -> Option<&LedgerRecord> {
        self.records
            .iter()
            .find(|r| matches!(r, LedgerRecord::Model { id: m, .. } if *m == id))
    }

    pub fn global_champion(&self) -> Option<usize> {
        self.records.iter().find_map(|r| match r {
            LedgerRecord::GlobalChampion { model_id, .. } => Some(*model_id),
            _ => None,
        })
    }

    pub fn n_models(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r, LedgerRecord::Model { .. }))
            .count()
    }
}
