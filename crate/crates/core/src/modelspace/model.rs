use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::terms::{Term, TermLabel};
use crate::error::{QmlaError, Result};
use crate::hamiltonian::family::{build_family_terms, Family};
use crate::hamiltonian::lattice::LatticeSpec;
use crate::hamiltonian::matrix::ComplexMatrix;

/// `Ĥ = Σ_k α_k T_k` on a fixed register. Terms are kept in canonical
/// sorted order so that equal term sets give equal models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    terms: Vec<Term>,
    n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parameters: Option<Vec<f64>>,
}

impl Model {
    pub fn new(mut terms: Vec<Term>, n_qubits: usize) -> Result<Self> {
        terms.sort();
        let mut seen = BTreeSet::new();
        for term in &terms {
            if term.min_qubits() > n_qubits {
                return Err(QmlaError::Structural(format!("{term} needs more than {n_qubits} qubits")));
            }
            for label in term.labels() {
                if !seen.insert(*label) {
                    return Err(QmlaError::Structural(format!("duplicate label {label}")));
                }
            }
        }
        if n_qubits == 0 {
            return Err(QmlaError::Structural("model on zero qubits".into()));
        }
        Ok(Self {
            terms,
            n_qubits,
            parameters: None,
        })
    }

    /// One term per label, register sized to fit.
    pub fn from_labels(labels: impl IntoIterator<Item = TermLabel>, n_qubits: usize) -> Result<Self> {
        Self::new(labels.into_iter().map(Term::single).collect(), n_qubits)
    }

    pub fn with_parameters(mut self, parameters: Vec<f64>) -> Result<Self> {
        if parameters.len() != self.terms.len() {
            return Err(QmlaError::DimensionMismatch {
                expected: self.terms.len(),
                found: parameters.len(),
            });
        }
        self.parameters = Some(parameters);
        Ok(self)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of free parameters `k`.
    pub fn cardinality(&self) -> usize {
        self.terms.len()
    }

    pub fn parameters(&self) -> Option<&[f64]> {
        self.parameters.as_deref()
    }

    pub fn labels(&self) -> BTreeSet<TermLabel> {
        self.terms.iter().flat_map(|t| t.labels().iter().copied()).collect()
    }

    /// Stable identifier; parameters are not part of it.
    pub fn key(&self) -> String {
        let terms: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        format!("q{}:{}", self.n_qubits, terms.join(";"))
    }

    pub fn same_structure(&self, other: &Model) -> bool {
        self.n_qubits == other.n_qubits && self.terms == other.terms
    }

    pub fn term_matrices(&self) -> Result<Vec<ComplexMatrix>> {
        self.terms.iter().map(|t| t.matrix(self.n_qubits)).collect()
    }

    /// Full Hamiltonian for the stored parameters.
    pub fn hamiltonian(&self) -> Result<ComplexMatrix> {
        let params = self
            .parameters
            .as_ref()
            .ok_or_else(|| QmlaError::Structural(format!("{} has no parameters", self.key())))?;
        let mut h = ComplexMatrix::zeros(1 << self.n_qubits);
        for (m, &a) in self.term_matrices()?.iter().zip(params) {
            h.add_scaled(m, a);
        }
        Ok(h)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Family model on a lattice, one parameter per summed term.
pub fn lattice_to_model(family: Family, lattice: &LatticeSpec) -> Result<Model> {
    let terms = build_family_terms(family, lattice)?;
    Model::new(terms, family.n_qubits(lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::pauli::Axis;

    #[test]
    fn family_cardinalities() {
        for lattice in [LatticeSpec::chain(2).unwrap(), LatticeSpec::ring(3).unwrap()] {
            assert_eq!(lattice_to_model(Family::Ising, &lattice).unwrap().cardinality(), 2);
            assert_eq!(lattice_to_model(Family::Heisenberg, &lattice).unwrap().cardinality(), 3);
            let hub = lattice_to_model(Family::Hubbard, &lattice).unwrap();
            assert_eq!(hub.cardinality(), 3);
            assert_eq!(hub.n_qubits(), 2 * lattice.n_sites());
        }
    }

    #[test]
    fn canonical_order_and_key() {
        let a = Model::from_labels([TermLabel::field(Axis::X, 1), TermLabel::coupling(Axis::Z, 1, 2)], 2).unwrap();
        let b = Model::from_labels([TermLabel::coupling(Axis::Z, 1, 2), TermLabel::field(Axis::X, 1)], 2).unwrap();
        assert_eq!(a.key(), b.key());
        assert_eq!(a.key(), "q2:pauli:z:(1,2);pauli:x:(1)");
    }

    #[test]
    fn rejects_duplicates_and_oversized() {
        let l = TermLabel::field(Axis::X, 1);
        assert!(Model::from_labels([l, l], 1).is_err());
        assert!(Model::from_labels([TermLabel::field(Axis::X, 3)], 2).is_err());
    }

    #[test]
    fn hamiltonian_needs_parameters() {
        let m = Model::from_labels([TermLabel::field(Axis::X, 1)], 1).unwrap();
        assert!(m.hamiltonian().is_err());
        let h = m.clone().with_parameters(vec![0.5]).unwrap().hamiltonian().unwrap();
        assert!((h.get(0, 1).re - 0.5).abs() < 1e-15);
        assert!(m.with_parameters(vec![0.5, 1.0]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let m = lattice_to_model(Family::Hubbard, &LatticeSpec::chain(2).unwrap())
            .unwrap()
            .with_parameters(vec![0.1, 0.2, 0.3])
            .unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Model>(&json).unwrap(), m);
    }
}
