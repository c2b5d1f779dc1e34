//! Reference implementations used only by tests. None of this shares code
//! with the library's numerics.

#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::Rng;
use rand_distr::StandardNormal;

use qmla_core::hamiltonian::ComplexMatrix;

pub mod invariants;

pub type Dense = Vec<Vec<C>>;

pub fn to_dense(m: &ComplexMatrix) -> Dense {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| m.get(r, c)).collect())
        .collect()
}

pub fn from_dense(d: &Dense) -> ComplexMatrix {
    ComplexMatrix::from_row_major(d.len(), d.iter().flatten().copied().collect()).unwrap()
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        C::new(1.0, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn zeros(n: usize) -> Dense {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            for j in 0..n {
                out[i][j] += x * b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Dense, b: &Dense, s: C) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + s * y).collect())
        .collect()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> Dense {
    let mut h = zeros(n);
    for i in 0..n {
        h[i][i] = C::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..n {
            let z = C::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            h[i][j] = z;
            h[j][i] = z.conj();
        }
    }
    h
}

/// `e^{-iHt}` by Taylor series with scaling and squaring.
pub fn expm_taylor(h: &Dense, t: f64) -> Dense {
    let n = h.len();
    let a: Dense = h
        .iter()
        .map(|r| r.iter().map(|x| x * C::new(0.0, -t)).collect())
        .collect();
    let norm = a
        .iter()
        .map(|r| r.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let scale = C::new(f64::powi(2.0, -s), 0.0);
    let a: Dense = a
        .iter()
        .map(|r| r.iter().map(|x| x * scale).collect())
        .collect();
    let mut sum = identity(n);
    let mut term = identity(n);
    for k in 1..=24 {
        term = mul(&term, &a);
        let inv = C::new(1.0 / k as f64, 0.0);
        term = term
            .iter()
            .map(|r| r.iter().map(|x| x * inv).collect())
            .collect();
        sum = add(&sum, &term, C::new(1.0, 0.0));
    }
    for _ in 0..s {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of a Hermitian matrix through its real `2n` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is each eigenvalue twice.
pub fn hermitian_eigenvalues(h: &Dense) -> Vec<f64> {
    let n = h.len();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = h[i][j].re;
            m[i + n][j + n] = h[i][j].re;
            m[i][j + n] = -h[i][j].im;
            m[i + n][j] = h[i][j].im;
        }
    }
    jacobi_eigenvalues(m).into_iter().step_by(2).collect()
}

/// Fermionic operators built directly on occupation-number states.
/// Basis index bit `M-1-m` holds the occupation of mode `m`, so mode 0 is
/// the most significant bit.
pub struct Fock {
    pub n_modes: usize,
}

impl Fock {
    fn occupied(&self, state: usize, mode: usize) -> bool {
        state >> (self.n_modes - 1 - mode) & 1 == 1
    }

    /// `(sign, new state)` for `c†_mode |state>`, if nonzero.
    fn create(&self, state: usize, mode: usize) -> Option<(f64, usize)> {
        if self.occupied(state, mode) {
            return None;
        }
        let before = (0..mode).filter(|&m| self.occupied(state, m)).count();
        let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, state | 1 << (self.n_modes - 1 - mode)))
    }

    fn annihilate(&self, state: usize, mode: usize) -> Option<(f64, usize)> {
        if !self.occupied(state, mode) {
            return None;
        }
        let before = (0..mode).filter(|&m| self.occupied(state, m)).count();
        let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, state & !(1 << (self.n_modes - 1 - mode))))
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    pub fn creation(&self, mode: usize) -> Dense {
        let mut m = zeros(self.dim());
        for s in 0..self.dim() {
            if let Some((sign, out)) = self.create(s, mode) {
                m[out][s] = C::new(sign, 0.0);
            }
        }
        m
    }

    pub fn annihilation(&self, mode: usize) -> Dense {
        let mut m = zeros(self.dim());
        for s in 0..self.dim() {
            if let Some((sign, out)) = self.annihilate(s, mode) {
                m[out][s] = C::new(sign, 0.0);
            }
        }
        m
    }

    /// `Σ_terms coef · c†_a c_b`, applied state by state.
    pub fn quadratic(&self, terms: &[(f64, usize, usize)]) -> Dense {
        let mut m = zeros(self.dim());
        for s in 0..self.dim() {
            for &(coef, a, b) in terms {
                let Some((s1, mid)) = self.annihilate(s, b) else {
                    continue;
                };
                let Some((s2, out)) = self.create(mid, a) else {
                    continue;
                };
                m[out][s] += C::new(coef * s1 * s2, 0.0);
            }
        }
        m
    }

    /// `Σ_pairs coef · n_a n_b`, diagonal in this basis.
    pub fn density_density(&self, pairs: &[(f64, usize, usize)]) -> Dense {
        let mut m = zeros(self.dim());
        for s in 0..self.dim() {
            for &(coef, a, b) in pairs {
                if self.occupied(s, a) && self.occupied(s, b) {
                    m[s][s] += C::new(coef, 0.0);
                }
            }
        }
        m
    }
}

/// Two-site Fermi-Hubbard Hamiltonian with modes (1↑, 1↓, 2↑, 2↓):
/// `t↑ (c†₀c₂ + c†₂c₀) + t↓ (c†₁c₃ + c†₃c₁) + U (n₀n₁ + n₂n₃)`.
pub fn hubbard_two_site(t_up: f64, t_down: f64, u: f64) -> Dense {
    let f = Fock { n_modes: 4 };
    let hop = f.quadratic(&[(t_up, 0, 2), (t_up, 2, 0), (t_down, 1, 3), (t_down, 3, 1)]);
    let onsite = f.density_density(&[(u, 0, 1), (u, 2, 3)]);
    add(&hop, &onsite, C::new(1.0, 0.0))
}

/// F1 between two bit vectors, counted directly.
pub fn f1_bits(candidate: &[bool], truth: &[bool]) -> f64 {
    let tp = candidate
        .iter()
        .zip(truth)
        .filter(|(c, t)| **c && **t)
        .count() as f64;
    let c = candidate.iter().filter(|b| **b).count() as f64;
    let t = truth.iter().filter(|b| **b).count() as f64;
    if tp == 0.0 {
        0.0
    } else {
        2.0 * tp / (c + t)
    }
}
