use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cloud::ParticleCloud;
use super::experiment::{design_experiment, Experiment, ExperimentRecord};
use super::prior::Prior;
use super::probes::ProbeSet;
use super::simulator::{ModelOperator, Target};
use crate::error::{QmlaError, Result};
use crate::hamiltonian::eigen::{survival_from_weights, HermitianEigen};

/// Floor applied to `ln L_e` when an evaluation update is degenerate.
pub const LN_FLOOR: f64 = -690.775_527_898_213_7; // ln(1e-300)

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QhlConfig {
    pub n_experiments: usize,
    pub n_particles: usize,
    /// Particles used for likelihood evaluation; `n_particles / 2` when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_particles: Option<usize>,
    #[serde(default = "default_a")]
    pub resample_a: f64,
}

fn default_a() -> f64 {
    0.98
}

impl QhlConfig {
    pub fn new(n_experiments: usize, n_particles: usize) -> Self {
        Self {
            n_experiments,
            n_particles,
            eval_particles: None,
            resample_a: default_a(),
        }
    }

    pub fn eval_particles(&self) -> usize {
        self.eval_particles.unwrap_or(self.n_particles / 2).max(2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 2 {
            return Err(QmlaError::Config("n_particles must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.resample_a) {
            return Err(QmlaError::Config(format!("resample_a {} outside [0, 1]", self.resample_a)));
        }
        Ok(())
    }
}

/// Posterior moments after one step of training.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl TraceRow {
    fn of(cloud: &ParticleCloud) -> Self {
        Self {
            mean: cloud.mean(),
            std: cloud.std(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingResult {
    pub posterior_mean: Vec<f64>,
    pub posterior_cov: Vec<Vec<f64>>,
    pub experiments: Vec<ExperimentRecord>,
    pub likelihoods: Vec<f64>,
    pub resample_count: usize,
    pub prior_resets: usize,
    /// Prior row followed by one row per experiment.
    pub trace: Vec<TraceRow>,
    pub cloud: ParticleCloud,
}

/// Per-particle spectra, cached until the particles move.
struct Spectra<'a> {
    op: &'a ModelOperator,
    probes: &'a ProbeSet,
    eigen: Vec<Option<HermitianEigen>>,
    weights: Vec<Vec<Option<Vec<f64>>>>,
}

impl<'a> Spectra<'a> {
    fn new(op: &'a ModelOperator, probes: &'a ProbeSet, n_particles: usize) -> Self {
        let mut s = Self {
            op,
            probes,
            eigen: Vec::new(),
            weights: Vec::new(),
        };
        s.invalidate(n_particles);
        s
    }

    fn invalidate(&mut self, n_particles: usize) {
        self.eigen = vec![None; n_particles];
        self.weights = vec![vec![None; self.probes.len()]; n_particles];
    }

    /// `p₀` for every particle under experiment `e`.
    fn p0_all(&mut self, cloud: &ParticleCloud, e: &Experiment) -> Result<Vec<f64>> {
        let probe = self.probes.state(e.probe_id, self.op.n_qubits())?.amplitudes();
        (0..cloud.n_particles())
            .map(|i| {
                if self.eigen[i].is_none() {
                    self.eigen[i] = Some(self.op.eigen(cloud.position(i))?);
                }
                let eig = self.eigen[i].as_ref().expect("filled above");
                let w = self.weights[i][e.probe_id].get_or_insert_with(|| eig.overlap_weights(probe));
                Ok(survival_from_weights(w, eig.eigenvalues(), e.t).clamp(0.0, 1.0))
            })
            .collect()
    }
}

/// Per-particle likelihood of a datum given `p₀`.
pub fn particle_likelihood(p0: f64, datum: u8) -> f64 {
    if datum == 0 {
        p0
    } else {
        1.0 - p0
    }
}

/// Bayes update of the weights given each particle's `p₀`. Returns
/// `L_e = Σ ℓ_p w_p`. When every particle assigns the datum zero
/// likelihood the cloud is left untouched and `DegenerateUpdate` is returned.
pub fn bayes_update(cloud: &mut ParticleCloud, datum: u8, p0: &[f64]) -> Result<f64> {
    if p0.len() != cloud.n_particles() {
        return Err(QmlaError::DimensionMismatch {
            expected: cloud.n_particles(),
            found: p0.len(),
        });
    }
    let ell: Vec<f64> = p0.iter().map(|&p| particle_likelihood(p, datum)).collect();
    let le: f64 = ell.iter().zip(cloud.weights()).map(|(l, w)| l * w).sum();
    if !(le > 0.0) {
        return Err(QmlaError::DegenerateUpdate);
    }
    for (w, l) in cloud.weights_mut().iter_mut().zip(&ell) {
        *w *= l / le;
    }
    cloud.normalise()?;
    Ok(le.min(1.0))
}

/// Weighted mean of `|p₀_true − p₀_p|` over the cloud.
pub fn mean_residual(weights: &[f64], p0: &[f64], true_p0: f64) -> f64 {
    weights.iter().zip(p0).map(|(w, p)| w * (true_p0 - p).abs()).sum()
}

/// Sequential Monte Carlo learning of the model's parameters against `target`.
pub fn train<R: Rng + ?Sized>(
    op: &ModelOperator,
    target: &Target,
    probes: &ProbeSet,
    prior: &Prior,
    config: &QhlConfig,
    rng: &mut R,
) -> Result<TrainingResult> {
    config.validate()?;
    if prior.dim() != op.n_params() {
        return Err(QmlaError::DimensionMismatch {
            expected: op.n_params(),
            found: prior.dim(),
        });
    }
    let n = config.n_particles;
    let mut cloud = ParticleCloud::from_prior(prior, n, rng)?;
    let mut spectra = Spectra::new(op, probes, n);
    let mut experiments = Vec::with_capacity(config.n_experiments);
    let mut likelihoods = Vec::with_capacity(config.n_experiments);
    let mut trace = vec![TraceRow::of(&cloud)];
    let mut resample_count = 0;
    let mut prior_resets = 0;

    for step in 0..config.n_experiments {
        let e = design_experiment(&cloud, step, probes.len(), rng);
        let datum = target.simulate_datum(&e, rng);
        let p0 = spectra.p0_all(&cloud, &e)?;
        let le = match bayes_update(&mut cloud, datum, &p0) {
            Ok(le) => le,
            Err(QmlaError::DegenerateUpdate) if prior_resets == 0 => {
                prior_resets += 1;
                cloud = ParticleCloud::from_prior(prior, n, rng)?;
                spectra.invalidate(n);
                let p0 = spectra.p0_all(&cloud, &e)?;
                bayes_update(&mut cloud, datum, &p0)?
            }
            Err(err) => return Err(err),
        };
        experiments.push(ExperimentRecord {
            probe_id: e.probe_id,
            t: e.t,
            datum,
        });
        likelihoods.push(le);
        if cloud.should_resample() {
            cloud.resample(config.resample_a, rng)?;
            spectra.invalidate(n);
            resample_count += 1;
        }
        trace.push(TraceRow::of(&cloud));
    }

    let cov = cloud.covariance();
    Ok(TrainingResult {
        posterior_mean: cloud.mean(),
        posterior_cov: (0..cov.nrows()).map(|r| cov.row(r).iter().copied().collect()).collect(),
        experiments,
        likelihoods,
        resample_count,
        prior_resets,
        trace,
        cloud,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLikelihood {
    pub tll: f64,
    /// Number of experiments whose `ln L_e` hit the floor.
    pub floored: usize,
}

/// `Σ_e ln L_e` over `records`, updating a fresh cloud of `n_eval`
/// particles drawn from `posterior`.
pub fn total_log_likelihood<R: Rng + ?Sized>(
    op: &ModelOperator,
    probes: &ProbeSet,
    posterior: &ParticleCloud,
    records: &[ExperimentRecord],
    n_eval: usize,
    resample_a: f64,
    rng: &mut R,
) -> Result<LogLikelihood> {
    let mut cloud = posterior.liu_west(resample_a, n_eval, rng)?;
    let mut spectra = Spectra::new(op, probes, n_eval);
    let mut tll = 0.0;
    let mut floored = 0;
    for rec in records {
        let p0 = spectra.p0_all(&cloud, &rec.experiment())?;
        match bayes_update(&mut cloud, rec.datum, &p0) {
            Ok(le) => {
                let l = le.ln();
                if l < LN_FLOOR {
                    floored += 1;
                    tll += LN_FLOOR;
                } else {
                    tll += l;
                }
            }
            Err(QmlaError::DegenerateUpdate) => {
                floored += 1;
                tll += LN_FLOOR;
            }
            Err(err) => return Err(err),
        }
        if cloud.should_resample() {
            cloud.resample(resample_a, rng)?;
            spectra.invalidate(n_eval);
        }
    }
    Ok(LogLikelihood { tll: tll.min(0.0), floored })
}

/// Mean residual of the (fixed) posterior cloud on each experiment.
pub fn residuals(
    op: &ModelOperator,
    probes: &ProbeSet,
    posterior: &ParticleCloud,
    experiments: &[Experiment],
    target: &Target,
) -> Result<Vec<f64>> {
    let mut spectra = Spectra::new(op, probes, posterior.n_particles());
    experiments
        .iter()
        .map(|e| {
            let p0 = spectra.p0_all(posterior, e)?;
            Ok(mean_residual(posterior.weights(), &p0, target.p0(e)))
        })
        .collect()
}
