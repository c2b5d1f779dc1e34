//! The top-level search loop and run evaluation.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::engine::Engine;
use super::ledger::{Ledger, LedgerRecord, Location};
use crate::comparison::{bf_points, build_comparison_graph, ComparisonStrategy, Standing};
use crate::error::{QmlaError, Result};
use crate::exploration::{fixed_set_generate, ga_generate, ga_terminate, initial_generation, FixedSet, GaConfig, GeneMapSpec, StrategyConfig};
use crate::hamiltonian::{Family, LatticeSpec};
use crate::modelspace::{f1_score, Chromosome, F1Metrics, Model, Term, TermLabel};
use crate::objectives::{normalise, EloState, Objective, RawScores, INITIAL_RATING};
use crate::rng::{stream, tag};

/// Result of `run_qmla`.
pub struct RunOutcome {
    pub champion_id: usize,
    pub champion: Model,
    pub family: Option<Family>,
    pub ledger: Ledger,
}

fn timed<T>(engine: &mut Engine, phase: String, f: impl FnOnce(&mut Engine) -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f(engine);
    let seconds = start.elapsed().as_secs_f64();
    engine.log(LedgerRecord::PhaseTime { phase, seconds });
    out
}

fn run_fixed_set(
    engine: &mut Engine,
    strategy: usize,
    tree: &str,
    family: Family,
    lattices: &[LatticeSpec],
    comparison: ComparisonStrategy,
) -> Result<usize> {
    let location = Location {
        strategy,
        tree: tree.to_string(),
        branch: 0,
    };
    let ids: Vec<usize> = fixed_set_generate(family, lattices)?
        .into_iter()
        .map(|m| engine.register(m, Some(family), location.clone(), None))
        .collect();
    engine.train_models(&ids)?;
    let (winner, _) = engine.consolidate(&ids, comparison, &location)?;
    engine.log(LedgerRecord::TreeChampion {
        strategy,
        tree: tree.to_string(),
        model_id: winner,
        family: Some(family),
    });
    Ok(winner)
}

fn run_family_forest(
    engine: &mut Engine,
    strategy: usize,
    trees: &[FixedSet],
    comparison: ComparisonStrategy,
) -> Result<usize> {
    let mut champions = Vec::new();
    for (n, t) in trees.iter().enumerate() {
        let label = if trees[..n].iter().any(|o| o.family == t.family) {
            format!("{}-{n}", t.family)
        } else {
            t.family.to_string()
        };
        champions.push(run_fixed_set(engine, strategy, &label, t.family, &t.lattices, comparison)?);
    }
    let location = Location {
        strategy,
        tree: "forest".into(),
        branch: 1,
    };
    let (winner, _) = engine.consolidate(&champions, ComparisonStrategy::Validation, &location)?;
    Ok(winner)
}

/// Scores, fitness and champion of one GA generation.
struct Generation {
    ids: Vec<usize>,
    fitness: Vec<f64>,
    champion: usize,
}

fn score_generation(
    engine: &mut Engine,
    strategy: usize,
    index: usize,
    ids: &[usize],
    ga: &GaConfig,
) -> Result<Generation> {
    let location = Location {
        strategy,
        tree: "ga".into(),
        branch: index,
    };
    let pairs: Vec<(usize, usize)> = if ga.objective.needs_all_pairs() {
        ids.iter()
            .enumerate()
            .flat_map(|(n, &a)| ids[n + 1..].iter().map(move |&b| (a, b)))
            .collect()
    } else if ga.objective == Objective::Elo {
        build_comparison_graph(ids.len())
            .edges()
            .iter()
            .map(|&(a, b)| (ids[a], ids[b]))
            .collect()
    } else {
        Vec::new()
    };
    let records = engine.compare(&pairs, ga.comparison, &location)?;
    let standings: Vec<Standing> = bf_points(ids, &records);

    let mut elo = EloState::new(ids.iter().copied(), INITIAL_RATING);
    for r in &records {
        elo.apply(r.i, r.j, r.log10_bf());
    }
    if ga.objective.needs_validation_tll() {
        engine.ensure_validation_tll(ids)?;
    }
    if ga.objective == Objective::Residual {
        engine.ensure_validation_residual(ids)?;
    }
    let n_validation = engine.validation_set().len();
    let raws: Vec<RawScores> = ids
        .iter()
        .zip(&standings)
        .map(|(&id, s)| RawScores {
            id,
            k: engine.entries_model(id).cardinality(),
            n: n_validation,
            tll: engine.validation_tll(id).map(|l| l.tll),
            residual: engine.validation_residual(id),
            points: s.points,
            log_bf_sum: s.log_bf_sum,
            rating: elo.rating(id),
            eliminated: engine.is_eliminated(id),
        })
        .collect();
    let keep = ga.survivors().min(ids.len());
    let fitness = ga.objective.fitness(&raws, keep)?;

    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]));
    let mut selection = vec![0.0; ids.len()];
    let s = normalise(&order[..keep].iter().map(|&i| fitness[i]).collect::<Vec<_>>());
    for (&i, p) in order[..keep].iter().zip(s) {
        selection[i] = p;
    }
    for (n, &id) in ids.iter().enumerate() {
        engine.log(LedgerRecord::Ratings {
            strategy,
            generation: index,
            model_id: id,
            chromosome: engine.entry(id)?.chromosome.clone(),
            rating: elo.rating(id),
            fitness: fitness[n],
            selection_probability: selection[n],
        });
    }
    let champion = ids[order[0]];
    engine.log(LedgerRecord::BranchChampion {
        location,
        model_id: champion,
        standings,
    });
    Ok(Generation {
        ids: ids.to_vec(),
        fitness,
        champion,
    })
}

fn run_genetic(engine: &mut Engine, strategy: usize, gene_map: &GeneMapSpec, ga: &GaConfig) -> Result<usize> {
    let genes = gene_map.build()?;
    let seed = engine.config().seed;
    let mut chromosomes = initial_generation(genes.len(), ga, &mut stream(seed, &[tag("ga"), strategy as u64, 0]))?;
    let mut history: Vec<Chromosome> = Vec::new();
    let mut generation = 1;
    loop {
        let location = Location {
            strategy,
            tree: "ga".into(),
            branch: generation,
        };
        let ids = chromosomes
            .iter()
            .map(|c| Ok(engine.register(genes.decode(c)?, None, location.clone(), Some(c.clone()))))
            .collect::<Result<Vec<_>>>()?;
        engine.train_models(&ids)?;
        let gen = score_generation(engine, strategy, generation, &ids, ga)?;
        history.push(engine.entry(gen.champion)?.chromosome.clone().expect("GA models carry chromosomes"));
        if ga_terminate(&history, generation, ga) {
            engine.log(LedgerRecord::TreeChampion {
                strategy,
                tree: "ga".into(),
                model_id: gen.champion,
                family: None,
            });
            return Ok(gen.champion);
        }
        let scored: Vec<(Chromosome, f64)> = gen
            .ids
            .iter()
            .zip(&gen.fitness)
            .map(|(&id, &f)| (engine.entry(id).map(|e| e.chromosome.clone().expect("GA model")), f))
            .map(|(c, f)| c.map(|c| (c, f)))
            .collect::<Result<_>>()?;
        let mut rng = stream(seed, &[tag("ga"), strategy as u64, generation as u64]);
        chromosomes = ga_generate(&scored, ga, &mut rng)?;
        generation += 1;
    }
}

/// Runs every configured strategy and consolidates their champions.
pub fn run_qmla(config: RunConfig) -> Result<RunOutcome> {
    let mut engine = Engine::new(config)?;
    let strategies = engine.config().strategies.clone();
    let mut champions = Vec::new();
    for (n, s) in strategies.iter().enumerate() {
        let phase = format!("strategy-{n}-{}", s.kind());
        let winner = timed(&mut engine, phase, |engine| match s {
            StrategyConfig::FixedSet {
                family,
                lattices,
                comparison,
                ..
            } => run_fixed_set(engine, n, &family.to_string(), *family, lattices, *comparison),
            StrategyConfig::FamilyForest { trees, comparison, .. } => run_family_forest(engine, n, trees, *comparison),
            StrategyConfig::Genetic { gene_map, ga, .. } => run_genetic(engine, n, gene_map, ga),
        })?;
        let family = engine.entry(winner)?.family;
        engine.log(LedgerRecord::StrategyChampion {
            strategy: n,
            model_id: winner,
            family,
        });
        champions.push(winner);
    }
    let champion_id = if champions.len() == 1 {
        champions[0]
    } else {
        let location = Location {
            strategy: strategies.len(),
            tree: "global".into(),
            branch: 0,
        };
        timed(&mut engine, "consolidation".into(), |engine| {
            engine.consolidate(&champions, ComparisonStrategy::Validation, &location)
        })?
        .0
    };
    let entry = engine.entry(champion_id)?.clone();
    let posterior_mean = engine
        .trained(champion_id)
        .map(|t| t.result.posterior_mean.clone())
        .unwrap_or_default();
    engine.log(LedgerRecord::GlobalChampion {
        model_id: champion_id,
        key: entry.model.key(),
        terms: entry.model.terms().iter().map(ToString::to_string).collect(),
        family: entry.family,
        posterior_mean: posterior_mean.clone(),
    });
    let champion = if posterior_mean.len() == entry.model.cardinality() && !posterior_mean.is_empty() {
        entry.model.clone().with_parameters(posterior_mean)?
    } else {
        entry.model.clone()
    };
    Ok(RunOutcome {
        champion_id,
        champion,
        family: entry.family,
        ledger: engine.into_ledger(),
    })
}

/// How well a run's champion matches the truth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub champion_id: usize,
    pub champion_key: String,
    pub champion_family: Option<Family>,
    pub champion_labels: Vec<TermLabel>,
    pub truth_key: String,
    pub truth_family: Option<Family>,
    pub truth_labels: Vec<TermLabel>,
    pub metrics: F1Metrics,
    pub exact_match: bool,
    pub family_match: Option<bool>,
}

/// Union of the labels in ledgered term strings.
pub fn labels_from_terms(terms: &[String]) -> Result<BTreeSet<TermLabel>> {
    let mut out = BTreeSet::new();
    for t in terms {
        out.extend(t.parse::<Term>()?.labels().iter().copied());
    }
    Ok(out)
}

/// Compares the ledgered global champion with the ledgered truth.
pub fn evaluate_run(ledger: &Ledger) -> Result<RunSummary> {
    let Some(LedgerRecord::RunStart {
        truth_key,
        truth_terms,
        truth_family,
        ..
    }) = ledger.run_start()
    else {
        return Err(QmlaError::Ledger("missing run_start".into()));
    };
    let champion_id = ledger
        .global_champion()
        .ok_or_else(|| QmlaError::Ledger("missing global_champion".into()))?;
    let Some(LedgerRecord::Model {
        key,
        terms,
        family,
        n_qubits,
        ..
    }) = ledger.model(champion_id)
    else {
        return Err(QmlaError::UnknownModel(champion_id));
    };
    let truth = labels_from_terms(truth_terms)?;
    let cand = labels_from_terms(terms)?;
    let metrics = f1_score(&cand, &truth);
    let truth_qubits = truth_key
        .strip_prefix('q')
        .and_then(|s| s.split(':').next())
        .and_then(|s| s.parse::<usize>().ok());
    Ok(RunSummary {
        champion_id,
        champion_key: key.clone(),
        champion_family: *family,
        champion_labels: cand.iter().copied().collect(),
        truth_key: truth_key.clone(),
        truth_family: *truth_family,
        truth_labels: truth.iter().copied().collect(),
        exact_match: cand == truth && truth_qubits.is_none_or(|q| q == *n_qubits),
        family_match: truth_family.map(|t| Some(t) == *family),
        metrics,
    })
}

/// Contents of `champion.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChampionSummary {
    pub model_id: usize,
    pub key: String,
    pub terms: Vec<String>,
    pub n_qubits: usize,
    pub family: Option<Family>,
    pub posterior_mean: Vec<f64>,
    pub truth_key: String,
    pub f1: f64,
    pub precision: f64,
    pub sensitivity: f64,
    pub exact_match: bool,
    pub family_match: Option<bool>,
}

pub fn champion_summary(ledger: &Ledger) -> Result<ChampionSummary> {
    let s = evaluate_run(ledger)?;
    let posterior_mean = ledger
        .records()
        .iter()
        .find_map(|r| match r {
            LedgerRecord::GlobalChampion { posterior_mean, .. } => Some(posterior_mean.clone()),
            _ => None,
        })
        .unwrap_or_default();
    let Some(LedgerRecord::Model { terms, n_qubits, .. }) = ledger.model(s.champion_id) else {
        return Err(QmlaError::UnknownModel(s.champion_id));
    };
    Ok(ChampionSummary {
        model_id: s.champion_id,
        key: s.champion_key,
        terms: terms.clone(),
        n_qubits: *n_qubits,
        family: s.champion_family,
        posterior_mean,
        truth_key: s.truth_key,
        f1: s.metrics.f1,
        precision: s.metrics.precision,
        sensitivity: s.metrics.sensitivity,
        exact_match: s.exact_match,
        family_match: s.family_match,
    })
}
