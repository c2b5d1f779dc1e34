//! `train` and `compare`: single-model learning and pairwise Bayes factors
//! outside a full search.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use qmla_core::comparison::{bayes_factor, Candidate, ComparisonRecord, ComparisonStrategy, EvalSettings};
use qmla_core::modelspace::{Model, Term};
use qmla_core::orchestrator::{validation_set, TruthSpec, ValidationConfig, SCHEMA_VERSION};
use qmla_core::qhl::{train as qhl_train, ModelOperator, ParamPrior, Prior, ProbeSet, QhlConfig, Target, TrainingResult};
use qmla_core::rng::{derive_seed, stable_hash, stream, tag};

use crate::write_json;

#[derive(Args)]
pub struct TrainArgs {
    /// Model terms, e.g. "pauli:x:(1)"; repeat for several.
    #[arg(long = "term", required = true)]
    terms: Vec<Term>,
    #[arg(long)]
    n_qubits: Option<usize>,
    /// Terms of the simulated system; defaults to the model's.
    #[arg(long = "true-term")]
    true_terms: Vec<Term>,
    /// Comma-separated true parameters; drawn from the prior when absent.
    #[arg(long, value_delimiter = ',')]
    true_params: Vec<f64>,
    /// "normal:MEAN:STD", "normal:MEAN:STD:LO:HI" or "uniform:LO:HI".
    #[arg(long)]
    prior: Option<String>,
    #[arg(long, default_value_t = 100)]
    experiments: usize,
    #[arg(long, default_value_t = 500)]
    particles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = qmla_core::qhl::DEFAULT_PROBE_COUNT)]
    probes: usize,
    /// Probe register size; must match across artifacts to be compared.
    #[arg(long)]
    max_qubits: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

/// Everything needed to reuse a training result elsewhere.
#[derive(Serialize, Deserialize)]
pub struct TrainArtifact {
    pub schema_version: u32,
    pub seed: u64,
    pub truth: TruthSpec,
    pub truth_parameters: Vec<f64>,
    pub terms: Vec<Term>,
    pub n_qubits: usize,
    pub prior: ParamPrior,
    pub qhl: QhlConfig,
    pub n_probes: usize,
    pub max_qubits: usize,
    pub result: TrainingResult,
}

fn parse_prior(s: &str) -> Result<ParamPrior> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts[1..]
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("bad prior {s:?}"))?;
    let prior = match (parts[0], nums.as_slice()) {
        ("normal", [m, sd]) => ParamPrior::normal(*m, *sd),
        ("normal", [m, sd, lo, hi]) => ParamPrior::truncated_normal(*m, *sd, *lo, *hi),
        ("uniform", [lo, hi]) => ParamPrior::uniform(*lo, *hi),
        _ => bail!("bad prior {s:?}"),
    };
    prior.validate()?;
    Ok(prior)
}

fn probes_for(seed: u64, n_probes: usize, max_qubits: usize) -> Result<ProbeSet> {
    Ok(ProbeSet::new(derive_seed(seed, &[tag("probes")]), n_probes, max_qubits)?)
}

fn csv_row(values: impl IntoIterator<Item = String>) -> String {
    let mut s = values.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

pub fn train(args: TrainArgs) -> Result<()> {
    let prior = args.prior.as_deref().map(parse_prior).transpose()?.unwrap_or_default();
    let min_q = args.terms.iter().map(Term::min_qubits).max().unwrap_or(1);
    let model = Model::new(args.terms.clone(), args.n_qubits.unwrap_or(min_q))?;
    let true_terms = if args.true_terms.is_empty() { args.terms.clone() } else { args.true_terms.clone() };
    let true_q = true_terms.iter().map(Term::min_qubits).max().unwrap_or(1).max(model.n_qubits());
    let truth_spec = TruthSpec::Terms {
        terms: true_terms,
        n_qubits: true_q,
        parameters: (!args.true_params.is_empty()).then(|| args.true_params.clone()),
    };
    let truth = truth_spec.build(args.seed, &prior)?;
    let max_qubits = args.max_qubits.unwrap_or(true_q.max(model.n_qubits()));
    ensure!(max_qubits >= true_q, "--max-qubits must cover the target");
    let probes = probes_for(args.seed, args.probes, max_qubits)?;
    let target = Target::new(truth.clone(), &probes)?;
    let op = ModelOperator::new(&model)?;
    let qhl = QhlConfig::new(args.experiments, args.particles);
    let mut rng = stream(args.seed, &[tag("train"), stable_hash(model.key().as_bytes())]);
    let result = qhl_train(&op, &target, &probes, &Prior::repeat(prior, model.cardinality())?, &qhl, &mut rng)?;

    fs::create_dir_all(&args.out)?;
    let mut trace = csv_row(
        std::iter::once("step".to_string())
            .chain((0..model.cardinality()).map(|k| format!("mean_{k}")))
            .chain((0..model.cardinality()).map(|k| format!("std_{k}"))),
    );
    for (step, row) in result.trace.iter().enumerate() {
        trace.push_str(&csv_row(
            std::iter::once(step.to_string())
                .chain(row.mean.iter().chain(&row.std).map(|v| crate::report::fmt12(*v))),
        ));
    }
    fs::write(args.out.join("trace.csv"), trace)?;

    let artifact = TrainArtifact {
        schema_version: SCHEMA_VERSION,
        seed: args.seed,
        truth: truth_spec,
        truth_parameters: truth.parameters().unwrap_or_default().to_vec(),
        terms: model.terms().to_vec(),
        n_qubits: model.n_qubits(),
        prior,
        qhl,
        n_probes: args.probes,
        max_qubits,
        result,
    };
    write_json(&args.out.join("artifact.json"), &artifact)?;
    let mut line = format!("{}:", model.key());
    for (m, s) in artifact.result.posterior_mean.iter().zip(artifact.result.trace.last().map_or(&vec![], |r| &r.std)) {
        let _ = write!(line, " {m:.6}±{s:.2e}");
    }
    println!("{line}");
    Ok(())
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long, requires = "b", conflicts_with_all = ["tll_a", "tll_b"])]
    a: Option<PathBuf>,
    #[arg(long)]
    b: Option<PathBuf>,
    /// Synthetic total log-likelihoods instead of artifacts.
    #[arg(long, requires = "tll_b", allow_hyphen_values = true)]
    tll_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tll_b: Option<f64>,
    #[arg(long, default_value_t = ComparisonStrategy::default())]
    strategy: ComparisonStrategy,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_artifact(path: &PathBuf) -> Result<TrainArtifact> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let a: TrainArtifact = serde_json::from_str(&text).with_context(|| format!("invalid artifact {}", path.display()))?;
    ensure!(a.schema_version == SCHEMA_VERSION, "{}: schema_version {} is not supported", path.display(), a.schema_version);
    Ok(a)
}

fn compare_artifacts(a: &TrainArtifact, b: &TrainArtifact, strategy: ComparisonStrategy) -> Result<ComparisonRecord> {
    ensure!(
        a.seed == b.seed && a.truth_parameters == b.truth_parameters && a.truth == b.truth,
        "artifacts were trained against different targets"
    );
    ensure!(
        a.n_probes == b.n_probes && a.max_qubits == b.max_qubits,
        "artifacts use different probe sets"
    );
    let probes = probes_for(a.seed, a.n_probes, a.max_qubits)?;
    let truth = a.truth.build(a.seed, &a.prior)?;
    let validation = validation_set(a.seed, &ValidationConfig::default(), &Target::new(truth, &probes)?, &probes);
    let (ma, mb) = (Model::new(a.terms.clone(), a.n_qubits)?, Model::new(b.terms.clone(), b.n_qubits)?);
    let (oa, ob) = (ModelOperator::new(&ma)?, ModelOperator::new(&mb)?);
    let ca = Candidate {
        id: 0,
        model: &ma,
        op: &oa,
        training: &a.result,
    };
    let cb = Candidate {
        id: 1,
        model: &mb,
        op: &ob,
        training: &b.result,
    };
    let settings = EvalSettings {
        seed: a.seed,
        probes: &probes,
        eval_particles: a.qhl.eval_particles().max(b.qhl.eval_particles()),
        resample_a: a.qhl.resample_a,
    };
    Ok(bayes_factor(&ca, &cb, strategy, &validation, &settings)?)
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let record = match (&args.a, &args.b, args.tll_a, args.tll_b) {
        (Some(a), Some(b), _, _) => compare_artifacts(&load_artifact(a)?, &load_artifact(b)?, args.strategy)?,
        (None, None, Some(la), Some(lb)) => ComparisonRecord::from_tlls(0, 1, args.strategy, la, lb),
        _ => bail!("give either --a and --b, or --tll-a and --tll-b"),
    };
    match &args.out {
        Some(path) => write_json(path, &record)?,
        None => println!("{}", serde_json::to_string_pretty(&record)?),
    }
    Ok(())
}
