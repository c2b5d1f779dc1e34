use nalgebra::DMatrix;
use rand::Rng;

use super::experiment::Experiment;
use super::probes::ProbeSet;
use crate::error::{QmlaError, Result};
use crate::hamiltonian::eigen::{survival_from_weights, HermitianEigen};
use crate::hamiltonian::matrix::{ComplexMatrix, C64};
use crate::modelspace::Model;

#[derive(Clone, Debug)]
enum TermMatrices {
    Real(Vec<DMatrix<f64>>),
    Complex(Vec<DMatrix<C64>>),
}

/// Term matrices of a model structure, ready to be combined with any
/// parameter vector.
#[derive(Clone, Debug)]
pub struct ModelOperator {
    n_qubits: usize,
    dim: usize,
    terms: TermMatrices,
}

impl ModelOperator {
    pub fn new(model: &Model) -> Result<Self> {
        let mats = model.term_matrices()?;
        let dim = 1 << model.n_qubits();
        let terms = if mats.iter().all(ComplexMatrix::is_real) {
            TermMatrices::Real(mats.iter().map(ComplexMatrix::to_real_nalgebra).collect())
        } else {
            TermMatrices::Complex(mats.iter().map(ComplexMatrix::to_nalgebra).collect())
        };
        Ok(Self {
            n_qubits: model.n_qubits(),
            dim,
            terms,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        match &self.terms {
            TermMatrices::Real(t) => t.len(),
            TermMatrices::Complex(t) => t.len(),
        }
    }

    fn check(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return Err(QmlaError::DimensionMismatch {
                expected: self.n_params(),
                found: params.len(),
            });
        }
        Ok(())
    }

    /// Eigendecomposition of `Σ_k α_k T_k`.
    pub fn eigen(&self, params: &[f64]) -> Result<HermitianEigen> {
        self.check(params)?;
        Ok(match &self.terms {
            TermMatrices::Real(ts) => {
                let mut h = DMatrix::<f64>::zeros(self.dim, self.dim);
                for (t, &a) in ts.iter().zip(params) {
                    h.zip_apply(t, |x, y| *x += a * y);
                }
                HermitianEigen::from_real_symmetric(h)
            }
            TermMatrices::Complex(ts) => {
                let mut h = DMatrix::<C64>::zeros(self.dim, self.dim);
                for (t, &a) in ts.iter().zip(params) {
                    h.zip_apply(t, |x, y| *x += y * a);
                }
                HermitianEigen::from_hermitian(h)
            }
        })
    }
}

/// The simulated system: a fully parameterised model with its spectrum and
/// probe overlaps precomputed.
#[derive(Clone, Debug)]
pub struct Target {
    model: Model,
    eigen: HermitianEigen,
    probe_weights: Vec<Vec<f64>>,
}

impl Target {
    pub fn new(model: Model, probes: &ProbeSet) -> Result<Self> {
        let params = model
            .parameters()
            .ok_or_else(|| QmlaError::Structural(format!("target {} has no parameters", model.key())))?;
        let eigen = ModelOperator::new(&model)?.eigen(params)?;
        let probe_weights = (0..probes.len())
            .map(|p| Ok(eigen.overlap_weights(probes.state(p, model.n_qubits())?.amplitudes())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model,
            eigen,
            probe_weights,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Probability of datum 0 for the experiment.
    pub fn p0(&self, e: &Experiment) -> f64 {
        survival_from_weights(&self.probe_weights[e.probe_id], self.eigen.eigenvalues(), e.t).clamp(0.0, 1.0)
    }

    /// Single-shot measurement: 0 with probability `p0`, else 1.
    pub fn simulate_datum<R: Rng + ?Sized>(&self, e: &Experiment, rng: &mut R) -> u8 {
        let u: f64 = rng.random();
        if u < self.p0(e) {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::pauli::Axis;
    use crate::modelspace::TermLabel;
    use crate::rng::stream;
    use std::f64::consts::FRAC_PI_2;

    fn sigma_x(alpha: f64) -> Model {
        Model::from_labels([TermLabel::field(Axis::X, 1)], 1)
            .unwrap()
            .with_parameters(vec![alpha])
            .unwrap()
    }

    #[test]
    fn zero_time_always_zero() {
        let probes = ProbeSet::new(0, 20, 1).unwrap();
        let target = Target::new(sigma_x(0.7), &probes).unwrap();
        let mut rng = stream(0, &[]);
        for p in 0..20 {
            assert_eq!(target.simulate_datum(&Experiment { probe_id: p, t: 0.0 }, &mut rng), 0);
        }
    }

    #[test]
    fn full_flip_always_one() {
        let probes = ProbeSet::new(0, 20, 1).unwrap();
        let target = Target::new(sigma_x(1.0), &probes).unwrap();
        let e = Experiment { probe_id: 0, t: FRAC_PI_2 };
        assert!(target.p0(&e) < 1e-15);
        let mut rng = stream(1, &[]);
        assert!((0..1000).all(|_| target.simulate_datum(&e, &mut rng) == 1));
    }

    #[test]
    fn empirical_frequency_matches_p0() {
        let probes = ProbeSet::new(0, 20, 1).unwrap();
        let target = Target::new(sigma_x(0.9), &probes).unwrap();
        let e = Experiment { probe_id: 0, t: 1.0 };
        let p0 = target.p0(&e);
        assert!((p0 - 0.9f64.cos().powi(2)).abs() < 1e-12);
        let n = 10_000;
        let mut rng = stream(2, &[]);
        let zeros = (0..n).filter(|_| target.simulate_datum(&e, &mut rng) == 0).count();
        let sigma = (p0 * (1.0 - p0) / n as f64).sqrt();
        assert!((zeros as f64 / n as f64 - p0).abs() < 3.0 * sigma);
    }

    #[test]
    fn complex_path_for_y_field() {
        let m = Model::from_labels([TermLabel::field(Axis::Y, 1)], 1).unwrap();
        let op = ModelOperator::new(&m).unwrap();
        let e = op.eigen(&[0.5]).unwrap();
        let mut v = e.eigenvalues().to_vec();
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 0.5).abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12);
        assert!(op.eigen(&[0.5, 0.1]).is_err());
    }
}
