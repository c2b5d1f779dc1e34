use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::prior::Prior;
use crate::error::{QmlaError, Result};

/// Weighted particle approximation of a parameter distribution.
/// Positions are stored particle-major: particle `i` occupies
/// `positions[i*dim..(i+1)*dim]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleCloud {
    dim: usize,
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl ParticleCloud {
    pub fn new(dim: usize, positions: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(QmlaError::Config(format!("need at least 2 particles, got {}", weights.len())));
        }
        if positions.len() != dim * weights.len() {
            return Err(QmlaError::DimensionMismatch {
                expected: dim * weights.len(),
                found: positions.len(),
            });
        }
        let mut cloud = Self { dim, positions, weights };
        cloud.normalise()?;
        Ok(cloud)
    }

    pub fn from_prior<R: Rng + ?Sized>(prior: &Prior, n_particles: usize, rng: &mut R) -> Result<Self> {
        let positions = (0..n_particles).flat_map(|_| prior.sample(rng)).collect();
        Self::new(prior.dim(), positions, vec![1.0; n_particles])
    }

    pub fn n_particles(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// Rescales weights to sum to one.
    pub fn normalise(&mut self) -> Result<()> {
        let total: f64 = self.weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(QmlaError::DegenerateUpdate);
        }
        self.weights.iter_mut().for_each(|w| *w /= total);
        Ok(())
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for (i, w) in self.weights.iter().enumerate() {
            for (mj, x) in m.iter_mut().zip(self.position(i)) {
                *mj += w * x;
            }
        }
        m
    }

    /// Weighted covariance `Σ_p w_p (x_p − μ)(x_p − μ)ᵀ`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let mu = self.mean();
        let mut cov = DMatrix::zeros(self.dim, self.dim);
        let mut dx = vec![0.0; self.dim];
        for (i, &w) in self.weights.iter().enumerate() {
            for ((d, x), m) in dx.iter_mut().zip(self.position(i)).zip(&mu) {
                *d = x - m;
            }
            for r in 0..self.dim {
                for c in 0..self.dim {
                    cov[(r, c)] += w * dx[r] * dx[c];
                }
            }
        }
        cov
    }

    pub fn std(&self) -> Vec<f64> {
        let cov = self.covariance();
        (0..self.dim).map(|i| cov[(i, i)].max(0.0).sqrt()).collect()
    }

    /// `1 / Σ w²`.
    pub fn effective_sample_size(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Resampling trigger: ESS strictly below `N_P / 2`.
    pub fn should_resample(&self) -> bool {
        self.effective_sample_size() < self.n_particles() as f64 / 2.0
    }

    /// Index drawn with probability equal to its weight.
    pub fn draw_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        WeightedIndex::new(&self.weights)
            .expect("normalised weights")
            .sample(rng)
    }

    /// Liu–West resampling into `n_out` uniformly weighted particles.
    ///
    /// Each new particle is `a·x_j + (1−a)·μ + ε` with parent `j` drawn by
    /// weight and `ε ~ N(0, (1−a²)Σ)`.
    pub fn liu_west<R: Rng + ?Sized>(&self, a: f64, n_out: usize, rng: &mut R) -> Result<Self> {
        let mu = DVector::from_vec(self.mean());
        let cov = self.covariance() * (1.0 - a * a);
        let chol = noise_factor(cov);
        let parents = WeightedIndex::new(&self.weights).map_err(|_| QmlaError::DegenerateUpdate)?;
        let mut positions = Vec::with_capacity(n_out * self.dim);
        for _ in 0..n_out {
            let j = parents.sample(rng);
            let parent = DVector::from_column_slice(self.position(j));
            let mut x = &parent * a + &mu * (1.0 - a);
            if let Some(l) = &chol {
                let z = DVector::from_fn(self.dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                x += l * z;
            }
            positions.extend(x.iter());
        }
        Self::new(self.dim, positions, vec![1.0; n_out])
    }

    /// Resamples in place keeping the particle count.
    pub fn resample<R: Rng + ?Sized>(&mut self, a: f64, rng: &mut R) -> Result<()> {
        *self = self.liu_west(a, self.n_particles(), rng)?;
        Ok(())
    }
}

/// Lower Cholesky factor of the noise covariance, or `None` when there is no
/// spread at all. Singular matrices get jitter `1e-12·trace` on the diagonal.
fn noise_factor(cov: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let trace = cov.trace();
    if !(trace > 0.0) {
        return None;
    }
    if let Some(c) = cov.clone().cholesky() {
        return Some(c.l());
    }
    let mut eps = 1e-12 * trace;
    for _ in 0..20 {
        let jittered = &cov + DMatrix::identity(cov.nrows(), cov.ncols()) * eps;
        if let Some(c) = jittered.cholesky() {
            return Some(c.l());
        }
        eps *= 10.0;
    }
    None
}
