//! Shared state of one run: target, probes, validation data, model
//! registry, training and likelihood caches, and the ledger.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::config::{RunConfig, ValidationConfig};
use super::ledger::{Ledger, LedgerRecord, Location, TrainingSummary};
use crate::comparison::{
    bayes_factor, bf_points, champion, score, tll_stream_labels, Candidate, ComparisonRecord, ComparisonStrategy,
    EvalSettings, Standing,
};
use crate::error::{QmlaError, Result};
use crate::hamiltonian::Family;
use crate::modelspace::{Chromosome, Model};
use crate::qhl::{
    residuals, train, Experiment, ExperimentRecord, LogLikelihood, ModelOperator, Prior, ProbeSet, QhlConfig, Target,
    TrainingResult,
};
use crate::rng::{derive_seed, stable_hash, stream, tag};

/// A trained model structure.
#[derive(Debug)]
pub struct Trained {
    pub op: ModelOperator,
    pub result: TrainingResult,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub model: Model,
    pub family: Option<Family>,
    pub location: Location,
    pub chromosome: Option<Chromosome>,
    pub qhl: QhlConfig,
}

type TrainingSlot = std::result::Result<Arc<Trained>, String>;

pub struct Engine {
    config: RunConfig,
    truth: Model,
    probes: ProbeSet,
    target: Target,
    validation: Vec<ExperimentRecord>,
    entries: Vec<Entry>,
    trainings: HashMap<String, TrainingSlot>,
    validation_tll: HashMap<String, LogLikelihood>,
    validation_residual: HashMap<String, f64>,
    ledger: Ledger,
    pool: rayon::ThreadPool,
}

fn training_key(model: &Model, qhl: &QhlConfig) -> String {
    format!("{}|{}|{}", model.key(), qhl.n_experiments, qhl.n_particles)
}

/// Shared validation data: probes in rotation, log-uniform times, data
/// simulated from the target on a stream derived from `seed`.
pub fn validation_set(seed: u64, v: &ValidationConfig, target: &Target, probes: &ProbeSet) -> Vec<ExperimentRecord> {
    let mut rng = stream(seed, &[tag("validation")]);
    let (lo, hi) = (v.t_min.ln(), v.t_max.ln());
    (0..v.n_experiments)
        .map(|i| {
            let e = Experiment {
                probe_id: i % probes.len(),
                t: rng.random_range(lo..hi).exp(),
            };
            ExperimentRecord {
                probe_id: e.probe_id,
                t: e.t,
                datum: target.simulate_datum(&e, &mut rng),
            }
        })
        .collect()
}

impl Engine {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let seed = config.seed;
        let truth = config.truth.build(seed, &config.prior)?;
        let probes = ProbeSet::new(derive_seed(seed, &[tag("probes")]), config.n_probes, config.max_qubits()?)?;
        let target = Target::new(truth.clone(), &probes)?;

        let validation = validation_set(seed, &config.validation, &target, &probes);

        let workers = config.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| QmlaError::Config(format!("worker pool: {e}")))?;

        let mut ledger = Ledger::new();
        let truth_chromosome = match &config.truth {
            super::config::TruthSpec::Chromosome { chromosome, .. } => Some(chromosome.clone()),
            _ => None,
        };
        ledger.push(LedgerRecord::RunStart {
            schema_version: config.schema_version,
            seed,
            truth_key: truth.key(),
            truth_terms: truth.terms().iter().map(ToString::to_string).collect(),
            truth_parameters: truth.parameters().unwrap_or_default().to_vec(),
            truth_family: config.truth.family(),
            truth_chromosome,
            n_probes: probes.len(),
            validation: config.validation,
            config: Box::new(config.clone()),
        });

        Ok(Self {
            config,
            truth,
            probes,
            target,
            validation,
            entries: Vec::new(),
            trainings: HashMap::new(),
            validation_tll: HashMap::new(),
            validation_residual: HashMap::new(),
            ledger,
            pool,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn truth(&self) -> &Model {
        &self.truth
    }

    pub fn probes(&self) -> &ProbeSet {
        &self.probes
    }

    pub fn validation_set(&self) -> &[ExperimentRecord] {
        &self.validation
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn into_ledger(self) -> Ledger {
        self.ledger
    }

    pub fn entries_model(&self, id: usize) -> &Model {
        &self.entries[id].model
    }

    pub fn entry(&self, id: usize) -> Result<&Entry> {
        self.entries.get(id).ok_or(QmlaError::UnknownModel(id))
    }

    pub fn log(&mut self, record: LedgerRecord) {
        self.ledger.push(record);
    }

    pub fn qhl_for(&self, strategy: usize) -> QhlConfig {
        self.config
            .strategies
            .get(strategy)
            .and_then(|s| s.qhl_override())
            .copied()
            .unwrap_or(self.config.qhl)
    }

    pub fn register(
        &mut self,
        model: Model,
        family: Option<Family>,
        location: Location,
        chromosome: Option<Chromosome>,
    ) -> usize {
        let id = self.entries.len();
        let strategy_kind = self
            .config
            .strategies
            .get(location.strategy)
            .map_or("global", |s| s.kind())
            .to_string();
        self.ledger.push(LedgerRecord::Model {
            id,
            key: model.key(),
            terms: model.terms().iter().map(ToString::to_string).collect(),
            n_qubits: model.n_qubits(),
            family,
            strategy_kind,
            location: location.clone(),
            chromosome: chromosome.clone(),
        });
        let qhl = self.qhl_for(location.strategy);
        self.entries.push(Entry {
            model,
            family,
            location,
            chromosome,
            qhl,
        });
        id
    }

    fn train_one(&self, model: &Model, qhl: &QhlConfig) -> TrainingSlot {
        let run = || -> Result<Trained> {
            if model.cardinality() == 0 {
                return Err(QmlaError::Structural("model has no terms".into()));
            }
            let op = ModelOperator::new(model)?;
            let prior = Prior::repeat(self.config.prior, model.cardinality())?;
            let mut rng = stream(self.config.seed, &[tag("train"), stable_hash(model.key().as_bytes())]);
            let result = train(&op, &self.target, &self.probes, &prior, qhl, &mut rng)?;
            Ok(Trained { op, result })
        };
        run().map(Arc::new).map_err(|e| e.to_string())
    }

    /// Trains every listed model whose structure has not been trained yet,
    /// then ledgers one training (or elimination) record per id.
    pub fn train_models(&mut self, ids: &[usize]) -> Result<()> {
        let mut todo: Vec<(String, usize)> = Vec::new();
        for &id in ids {
            let e = self.entry(id)?;
            let key = training_key(&e.model, &e.qhl);
            if !self.trainings.contains_key(&key) && !todo.iter().any(|(k, _)| *k == key) {
                todo.push((key, id));
            }
        }
        let fresh: Vec<TrainingSlot> = self.pool.install(|| {
            todo.par_iter()
                .map(|(_, id)| {
                    let e = &self.entries[*id];
                    self.train_one(&e.model, &e.qhl)
                })
                .collect()
        });
        let mut first_use: HashMap<String, usize> = HashMap::new();
        for ((key, id), slot) in todo.into_iter().zip(fresh) {
            first_use.insert(key.clone(), id);
            self.trainings.insert(key, slot);
        }
        for &id in ids {
            let e = &self.entries[id];
            let key = training_key(&e.model, &e.qhl);
            let reused = first_use.get(&key) != Some(&id);
            let record = match &self.trainings[&key] {
                Ok(t) => LedgerRecord::Training {
                    model_id: id,
                    key: e.model.key(),
                    reused,
                    summary: TrainingSummary::from(&t.result),
                },
                Err(reason) => LedgerRecord::Eliminated {
                    model_id: id,
                    reason: reason.clone(),
                },
            };
            self.ledger.push(record);
        }
        Ok(())
    }

    pub fn trained(&self, id: usize) -> Option<Arc<Trained>> {
        let e = self.entries.get(id)?;
        self.trainings.get(&training_key(&e.model, &e.qhl))?.as_ref().ok().cloned()
    }

    pub fn is_eliminated(&self, id: usize) -> bool {
        self.trained(id).is_none()
    }

    fn settings(&self, qhl: &QhlConfig) -> EvalSettings<'_> {
        EvalSettings {
            seed: self.config.seed,
            probes: &self.probes,
            eval_particles: qhl.eval_particles(),
            resample_a: qhl.resample_a,
        }
    }

    fn candidate<'a>(&'a self, id: usize, trained: &'a Trained) -> Candidate<'a> {
        Candidate {
            id,
            model: &self.entries[id].model,
            op: &trained.op,
            training: &trained.result,
        }
    }

    /// Log-likelihoods on the shared validation set, cached per structure.
    pub fn ensure_validation_tll(&mut self, ids: &[usize]) -> Result<()> {
        let mut todo: Vec<(String, usize)> = Vec::new();
        for &id in ids {
            let e = self.entry(id)?;
            let key = training_key(&e.model, &e.qhl);
            if self.trained(id).is_some() && !self.validation_tll.contains_key(&key) && !todo.iter().any(|(k, _)| *k == key) {
                todo.push((key, id));
            }
        }
        let scores: Vec<Result<LogLikelihood>> = self.pool.install(|| {
            todo.par_iter()
                .map(|(_, id)| {
                    let t = self.trained(*id).expect("checked above");
                    let c = self.candidate(*id, &t);
                    let labels = tll_stream_labels(ComparisonStrategy::Validation, c.model, c.model, c.model);
                    score(&c, &self.validation, &labels, &self.settings(&self.entries[*id].qhl))
                })
                .collect()
        });
        for ((key, _), s) in todo.into_iter().zip(scores) {
            self.validation_tll.insert(key, s?);
        }
        Ok(())
    }

    pub fn validation_tll(&self, id: usize) -> Option<LogLikelihood> {
        let e = self.entries.get(id)?;
        self.validation_tll.get(&training_key(&e.model, &e.qhl)).copied()
    }

    /// Mean residual of the trained posterior over the validation experiments.
    pub fn ensure_validation_residual(&mut self, ids: &[usize]) -> Result<()> {
        let exps: Vec<Experiment> = self.validation.iter().map(ExperimentRecord::experiment).collect();
        for &id in ids {
            let e = self.entry(id)?;
            let key = training_key(&e.model, &e.qhl);
            if self.validation_residual.contains_key(&key) {
                continue;
            }
            if let Some(t) = self.trained(id) {
                let r = residuals(&t.op, &self.probes, &t.result.cloud, &exps, &self.target)?;
                let mean = r.iter().sum::<f64>() / r.len().max(1) as f64;
                self.validation_residual.insert(key, mean);
            }
        }
        Ok(())
    }

    pub fn validation_residual(&self, id: usize) -> Option<f64> {
        let e = self.entries.get(id)?;
        self.validation_residual.get(&training_key(&e.model, &e.qhl)).copied()
    }

    /// Bayes factors for the listed pairs; pairs involving an eliminated
    /// model are skipped. Records are ledgered in input order.
    pub fn compare(
        &mut self,
        pairs: &[(usize, usize)],
        strategy: ComparisonStrategy,
        location: &Location,
    ) -> Result<Vec<ComparisonRecord>> {
        let live: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(a, b)| !self.is_eliminated(a) && !self.is_eliminated(b))
            .collect();
        let records: Vec<ComparisonRecord> = if strategy == ComparisonStrategy::Validation {
            let ids: Vec<usize> = live.iter().flat_map(|&(a, b)| [a, b]).collect();
            self.ensure_validation_tll(&ids)?;
            live.iter()
                .map(|&(a, b)| {
                    let (la, lb) = (self.validation_tll(a).expect("cached"), self.validation_tll(b).expect("cached"));
                    ComparisonRecord {
                        n_experiments: self.validation.len(),
                        floored_i: la.floored,
                        floored_j: lb.floored,
                        ..ComparisonRecord::from_tlls(a, b, strategy, la.tll, lb.tll)
                    }
                })
                .collect()
        } else {
            let out: Vec<Result<ComparisonRecord>> = self.pool.install(|| {
                live.par_iter()
                    .map(|&(a, b)| {
                        let (ta, tb) = (self.trained(a).expect("live"), self.trained(b).expect("live"));
                        let (ca, cb) = (self.candidate(a, &ta), self.candidate(b, &tb));
                        bayes_factor(&ca, &cb, strategy, &self.validation, &self.settings(&self.entries[a].qhl))
                    })
                    .collect()
            });
            out.into_iter().collect::<Result<_>>()?
        };
        for r in &records {
            self.ledger.push(LedgerRecord::Comparison {
                location: location.clone(),
                record: r.clone(),
            });
        }
        Ok(records)
    }

    /// All-pairs comparison and points consolidation of a branch.
    pub fn consolidate(
        &mut self,
        ids: &[usize],
        strategy: ComparisonStrategy,
        location: &Location,
    ) -> Result<(usize, Vec<Standing>)> {
        if ids.is_empty() {
            return Err(QmlaError::Config("cannot consolidate an empty branch".into()));
        }
        let pairs: Vec<(usize, usize)> = ids
            .iter()
            .enumerate()
            .flat_map(|(n, &a)| ids[n + 1..].iter().map(move |&b| (a, b)))
            .collect();
        let records = self.compare(&pairs, strategy, location)?;
        let standings = bf_points(ids, &records);
        let live: Vec<Standing> = standings
            .iter()
            .filter(|s| !self.is_eliminated(s.id))
            .cloned()
            .collect();
        let winner = champion(if live.is_empty() { &standings } else { &live }).expect("nonempty branch");
        self.ledger.push(LedgerRecord::BranchChampion {
            location: location.clone(),
            model_id: winner,
            standings: standings.clone(),
        });
        Ok((winner, standings))
    }
}
