use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{QmlaError, Result};
use crate::hamiltonian::matrix::{StateVector, C64, ONE, ZERO};
use crate::rng::{stream, tag};

pub const DEFAULT_PROBE_COUNT: usize = 20;

/// Fixed set of product-state probes over up to `max_qubits` qubits.
///
/// The first four probes are the computational-basis patterns `00…0`,
/// `11…1`, `0101…` and `1010…`; the rest are seeded Haar-random product
/// states. A model on `q` qubits uses the first `q` single-qubit factors of
/// each probe.
#[derive(Clone, Debug)]
pub struct ProbeSet {
    seed: u64,
    max_qubits: usize,
    factors: Vec<Vec<[C64; 2]>>,
    states: Vec<Vec<StateVector>>,
}

fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let mut g = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (g(), g());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / norm, b / norm]
}

impl ProbeSet {
    pub fn new(seed: u64, n_probes: usize, max_qubits: usize) -> Result<Self> {
        if n_probes == 0 || max_qubits == 0 {
            return Err(QmlaError::Config("probe set needs at least one probe and one qubit".into()));
        }
        let zero = [ONE, ZERO];
        let one = [ZERO, ONE];
        let mut rng = stream(seed, &[tag("probes")]);
        let factors: Vec<Vec<[C64; 2]>> = (0..n_probes)
            .map(|p| {
                (0..max_qubits)
                    .map(|q| match p {
                        0 => zero,
                        1 => one,
                        2 => if q % 2 == 0 { zero } else { one },
                        3 => if q % 2 == 0 { one } else { zero },
                        _ => haar_qubit(&mut rng),
                    })
                    .collect()
            })
            .collect();
        let states = factors
            .iter()
            .map(|f| (1..=max_qubits).map(|q| StateVector::product(&f[..q])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            seed,
            max_qubits,
            factors,
            states,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_qubits(&self) -> usize {
        self.max_qubits
    }

    pub fn state(&self, probe_id: usize, n_qubits: usize) -> Result<&StateVector> {
        if n_qubits == 0 || n_qubits > self.max_qubits {
            return Err(QmlaError::DimensionMismatch {
                expected: self.max_qubits,
                found: n_qubits,
            });
        }
        self.states
            .get(probe_id)
            .map(|s| &s[n_qubits - 1])
            .ok_or(QmlaError::DimensionMismatch {
                expected: self.len(),
                found: probe_id,
            })
    }
}
