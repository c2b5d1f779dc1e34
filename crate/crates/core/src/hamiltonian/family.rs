//! Ising, Heisenberg and Fermi-Hubbard lattice families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::jordan_wigner::Spin;
use super::lattice::LatticeSpec;
use super::pauli::Axis;
use crate::error::{QmlaError, Result};
use crate::modelspace::{Term, TermLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ising,
    Heisenberg,
    Hubbard,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Ising, Family::Heisenberg, Family::Hubbard];

    /// Qubits needed to simulate this family on `lattice`.
    pub fn n_qubits(self, lattice: &LatticeSpec) -> usize {
        match self {
            Family::Hubbard => 2 * lattice.n_sites(),
            _ => lattice.n_sites(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ising => "ising",
            Family::Heisenberg => "heisenberg",
            Family::Hubbard => "hubbard",
        })
    }
}

impl FromStr for Family {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising" => Ok(Family::Ising),
            "heisenberg" => Ok(Family::Heisenberg),
            "hubbard" => Ok(Family::Hubbard),
            other => Err(QmlaError::Config(format!("unknown family {other:?}"))),
        }
    }
}

fn coupling_term(lattice: &LatticeSpec, label: impl Fn((usize, usize)) -> TermLabel) -> Option<Term> {
    let labels: Vec<TermLabel> = lattice.couplings().iter().map(|&p| label(p)).collect();
    Term::new(labels).ok()
}

fn site_term(lattice: &LatticeSpec, label: impl Fn(usize) -> TermLabel) -> Term {
    Term::new((1..=lattice.n_sites()).map(label).collect()).expect("lattice has at least one site")
}

/// Summed terms of the family on `lattice`, each carrying one parameter.
///
/// Ising: `[Σ σᶻσᶻ over couplings, Σ σˣ over sites]`.
/// Heisenberg: `[Σ σˣσˣ, Σ σʸσʸ, Σ σᶻσᶻ]` over couplings.
/// Hubbard: `[spin-up hopping, spin-down hopping, Σ n↑n↓]` on `2N` qubits.
///
/// A coupling sum over an empty coupling set is the zero operator and is
/// left out; a family with nothing left (Heisenberg without couplings) is a
/// structural error.
pub fn build_family_terms(family: Family, lattice: &LatticeSpec) -> Result<Vec<Term>> {
    let terms: Vec<Term> = match family {
        Family::Ising => coupling_term(lattice, |s| TermLabel::coupling(Axis::Z, s.0, s.1))
            .into_iter()
            .chain(std::iter::once(site_term(lattice, |k| TermLabel::field(Axis::X, k))))
            .collect(),
        Family::Heisenberg => Axis::ALL
            .iter()
            .filter_map(|&a| coupling_term(lattice, |s| TermLabel::coupling(a, s.0, s.1)))
            .collect(),
        Family::Hubbard => [Spin::Up, Spin::Down]
            .iter()
            .filter_map(|&spin| coupling_term(lattice, |s| TermLabel::hopping(spin, s.0, s.1)))
            .chain(std::iter::once(site_term(lattice, TermLabel::onsite)))
            .collect(),
    };
    if terms.is_empty() {
        return Err(QmlaError::Structural(format!(
            "{family} terms all sum over couplings, but lattice {} has none",
            lattice.label()
        )));
    }
    Ok(terms)
}
