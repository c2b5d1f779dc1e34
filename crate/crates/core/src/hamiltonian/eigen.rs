//! Hermitian eigendecomposition and the unitary evolution built from it.
//!
//! `e^{-iHt} = V e^{-i Λ t} V†`. Real symmetric inputs (every Hamiltonian in
//! the Ising, Heisenberg-XYZ and Jordan-Wigner Hubbard families) take a real
//! solver path; the spectrum and the evolution are identical either way.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, StateVector, C64, EVOLUTION_TOL, ZERO};
use crate::error::{QmlaError, Result};

#[derive(Clone, Debug)]
enum Basis {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

/// Spectrum and eigenbasis of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    dim: usize,
    values: Vec<f64>,
    basis: Basis,
}

fn hermitian_tolerance(h: &ComplexMatrix) -> f64 {
    EVOLUTION_TOL * h.max_abs().max(1.0)
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        let defect = h.hermiticity_defect();
        if defect > hermitian_tolerance(h) {
            return Err(QmlaError::NotHermitian(defect));
        }
        if h.is_real() {
            Ok(Self::from_real_symmetric(h.to_real_nalgebra()))
        } else {
            Ok(Self::from_hermitian(h.to_nalgebra()))
        }
    }

    /// Skips the Hermiticity check; the caller guarantees it.
    pub fn from_hermitian(h: DMatrix<C64>) -> Self {
        let dim = h.nrows();
        let eig = h.symmetric_eigen();
        Self {
            dim,
            values: eig.eigenvalues.iter().copied().collect(),
            basis: Basis::Complex(eig.eigenvectors),
        }
    }

    /// Skips the Hermiticity check; the caller guarantees symmetry.
    pub fn from_real_symmetric(h: DMatrix<f64>) -> Self {
        let dim = h.nrows();
        let eig = h.symmetric_eigen();
        Self {
            dim,
            values: eig.eigenvalues.iter().copied().collect(),
            basis: Basis::Real(eig.eigenvectors),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Column `k` of the eigenbasis as complex amplitudes.
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        match &self.basis {
            Basis::Real(v) => v.column(k).iter().map(|&x| C64::new(x, 0.0)).collect(),
            Basis::Complex(v) => v.column(k).iter().copied().collect(),
        }
    }

    /// Squared overlaps `|<v_k|psi>|^2` for each eigenvector.
    pub fn overlap_weights(&self, psi: &[C64]) -> Vec<f64> {
        let d = self.dim;
        match &self.basis {
            Basis::Real(v) => {
                let cols = v.as_slice();
                (0..d)
                    .map(|k| {
                        let col = &cols[k * d..(k + 1) * d];
                        let (mut re, mut im) = (0.0, 0.0);
                        for (x, p) in col.iter().zip(psi) {
                            re += x * p.re;
                            im += x * p.im;
                        }
                        re * re + im * im
                    })
                    .collect()
            }
            Basis::Complex(v) => {
                let cols = v.as_slice();
                (0..d)
                    .map(|k| {
                        let col = &cols[k * d..(k + 1) * d];
                        col.iter()
                            .zip(psi)
                            .map(|(x, p)| x.conj() * p)
                            .sum::<C64>()
                            .norm_sqr()
                    })
                    .collect()
            }
        }
    }

    /// `|<psi| e^{-iHt} |psi>|^2`.
    pub fn survival_probability(&self, psi: &[C64], t: f64) -> f64 {
        let weights = self.overlap_weights(psi);
        survival_from_weights(&weights, &self.values, t)
    }

    /// `V e^{-iΛt} V†`.
    pub fn evolution(&self, t: f64) -> ComplexMatrix {
        let d = self.dim;
        let phases: Vec<C64> = self
            .values
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * t))
            .collect();
        let mut u = ComplexMatrix::zeros(d);
        let vecs: Vec<Vec<C64>> = (0..d).map(|k| self.eigenvector(k)).collect();
        for r in 0..d {
            for c in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += vecs[k][r] * phases[k] * vecs[k][c].conj();
                }
                u.set(r, c, acc);
            }
        }
        u
    }
}

/// `|Σ_k w_k e^{-i λ_k t}|^2`, the survival amplitude expressed in the eigenbasis.
pub fn survival_from_weights(weights: &[f64], values: &[f64], t: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (w, l) in weights.iter().zip(values) {
        let (s, c) = (l * t).sin_cos();
        re += w * c;
        im -= w * s;
    }
    re * re + im * im
}

/// `e^{-iht}` for Hermitian `h`.
pub fn expm_unitary(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(HermitianEigen::new(h)?.evolution(t))
}

/// Probability of projecting back onto the probe after evolving for `t`:
/// `|<psi| e^{-iht} |psi>|^2`.
pub fn likelihood_p0(h: &ComplexMatrix, t: f64, probe: &StateVector) -> Result<f64> {
    if h.dim() != probe.dim() {
        return Err(QmlaError::DimensionMismatch {
            expected: h.dim(),
            found: probe.dim(),
        });
    }
    let u = expm_unitary(h, t)?;
    let evolved = u.apply(probe.amplitudes());
    Ok(probe.inner(&evolved).norm_sqr())
}
