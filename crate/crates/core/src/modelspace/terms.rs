use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{QmlaError, Result};
use crate::hamiltonian::jordan_wigner::{hopping, hubbard_mode, number_operator, Spin};
use crate::hamiltonian::matrix::ComplexMatrix;
use crate::hamiltonian::pauli::{pauli_string, Axis};

/// One elementary operator. Site indices are 1-based; pairs are stored
/// ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermLabel {
    PauliCoupling { sites: (usize, usize), axis: Axis },
    PauliField { site: usize, axis: Axis },
    Hopping { sites: (usize, usize), spin: Spin },
    Onsite { site: usize },
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TermLabel {
    pub fn coupling(axis: Axis, a: usize, b: usize) -> Self {
        TermLabel::PauliCoupling {
            sites: ordered(a, b),
            axis,
        }
    }

    pub fn field(axis: Axis, site: usize) -> Self {
        TermLabel::PauliField { site, axis }
    }

    pub fn hopping(spin: Spin, a: usize, b: usize) -> Self {
        TermLabel::Hopping {
            sites: ordered(a, b),
            spin,
        }
    }

    pub fn onsite(site: usize) -> Self {
        TermLabel::Onsite { site }
    }

    /// Smallest qubit register the label acts on.
    pub fn min_qubits(&self) -> usize {
        match *self {
            TermLabel::PauliCoupling { sites, .. } => sites.1,
            TermLabel::PauliField { site, .. } => site,
            TermLabel::Hopping { sites, .. } => 2 * sites.1,
            TermLabel::Onsite { site } => 2 * site,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = match *self {
            TermLabel::PauliCoupling { sites, .. } | TermLabel::Hopping { sites, .. } => {
                sites.0 == 0 || sites.0 == sites.1
            }
            TermLabel::PauliField { site, .. } | TermLabel::Onsite { site } => site == 0,
        };
        if bad {
            return Err(QmlaError::ParseTerm(format!("invalid sites in {self}")));
        }
        Ok(())
    }

    pub fn matrix(&self, n_qubits: usize) -> Result<ComplexMatrix> {
        if self.min_qubits() > n_qubits {
            return Err(QmlaError::Structural(format!("{self} does not fit on {n_qubits} qubits")));
        }
        match *self {
            TermLabel::PauliCoupling { sites, axis } => pauli_string(n_qubits, &[(sites.0, axis), (sites.1, axis)]),
            TermLabel::PauliField { site, axis } => pauli_string(n_qubits, &[(site, axis)]),
            TermLabel::Hopping { sites, spin } => {
                hopping(hubbard_mode(sites.0, spin), hubbard_mode(sites.1, spin), n_qubits)
            }
            TermLabel::Onsite { site } => {
                let up = number_operator(hubbard_mode(site, Spin::Up), n_qubits)?;
                let down = number_operator(hubbard_mode(site, Spin::Down), n_qubits)?;
                Ok(up.matmul(&down))
            }
        }
    }
}

impl fmt::Display for TermLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermLabel::PauliCoupling { sites, axis } => write!(f, "pauli:{axis}:({},{})", sites.0, sites.1),
            TermLabel::PauliField { site, axis } => write!(f, "pauli:{axis}:({site})"),
            TermLabel::Hopping { sites, spin } => {
                let s = match spin {
                    Spin::Up => "up",
                    Spin::Down => "down",
                };
                write!(f, "hop:{s}:({},{})", sites.0, sites.1)
            }
            TermLabel::Onsite { site } => write!(f, "onsite:({site})"),
        }
    }
}

fn parse_sites(s: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl FromStr for TermLabel {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        let err = || QmlaError::ParseTerm(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let label = match parts.as_slice() {
            ["pauli", axis, sites] => {
                let axis: Axis = axis.parse().map_err(|_| err())?;
                match parse_sites(sites).ok_or_else(err)?.as_slice() {
                    [k] => TermLabel::field(axis, *k),
                    [k, l] => TermLabel::coupling(axis, *k, *l),
                    _ => return Err(err()),
                }
            }
            ["hop", spin, sites] => {
                let spin = match *spin {
                    "up" => Spin::Up,
                    "down" => Spin::Down,
                    _ => return Err(err()),
                };
                match parse_sites(sites).ok_or_else(err)?.as_slice() {
                    [k, l] => TermLabel::hopping(spin, *k, *l),
                    _ => return Err(err()),
                }
            }
            ["onsite", sites] => match parse_sites(sites).ok_or_else(err)?.as_slice() {
                [k] => TermLabel::onsite(*k),
                _ => return Err(err()),
            },
            _ => return Err(err()),
        };
        label.validate()?;
        Ok(label)
    }
}

impl Serialize for TermLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TermLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A group of labels sharing one parameter, e.g. `Σ σᶻσᶻ` over a lattice.
/// Labels are kept sorted and unique.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    labels: Vec<TermLabel>,
}

impl Term {
    pub fn new(mut labels: Vec<TermLabel>) -> Result<Self> {
        labels.sort();
        labels.dedup();
        if labels.is_empty() {
            return Err(QmlaError::Structural("term with no labels".into()));
        }
        Ok(Self { labels })
    }

    pub fn single(label: TermLabel) -> Self {
        Self { labels: vec![label] }
    }

    pub fn labels(&self) -> &[TermLabel] {
        &self.labels
    }

    pub fn min_qubits(&self) -> usize {
        self.labels.iter().map(TermLabel::min_qubits).max().unwrap_or(0)
    }

    pub fn matrix(&self, n_qubits: usize) -> Result<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(1 << n_qubits);
        for label in &self.labels {
            m.add_scaled(&label.matrix(n_qubits)?, 1.0);
        }
        Ok(m)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

impl FromStr for Term {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        let labels = s.split('+').map(str::parse).collect::<Result<Vec<_>>>()?;
        Term::new(labels)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::matrix::kron;

    #[test]
    fn label_string_forms() {
        assert_eq!(TermLabel::coupling(Axis::X, 4, 2).to_string(), "pauli:x:(2,4)");
        assert_eq!(TermLabel::field(Axis::Z, 3).to_string(), "pauli:z:(3)");
        assert_eq!(TermLabel::hopping(Spin::Up, 1, 2).to_string(), "hop:up:(1,2)");
        assert_eq!(TermLabel::onsite(3).to_string(), "onsite:(3)");
    }

    #[test]
    fn label_round_trip() {
        for s in ["pauli:x:(2,4)", "pauli:y:(1)", "hop:down:(1,3)", "onsite:(2)"] {
            let l: TermLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
        assert_eq!("pauli:x:(4,2)".parse::<TermLabel>().unwrap().to_string(), "pauli:x:(2,4)");
    }

    #[test]
    fn malformed_labels_rejected() {
        for s in ["pauli:w:(1,2)", "pauli:x:(1,1)", "pauli:x:(0)", "hop:up:(1)", "onsite:(1,2)", "x", ""] {
            assert!(s.parse::<TermLabel>().is_err(), "{s}");
        }
    }

    #[test]
    fn coupling_matrix() {
        let m = TermLabel::coupling(Axis::Z, 1, 2).matrix(2).unwrap();
        assert!(m.max_abs_diff(&kron(&Axis::Z.matrix(), &Axis::Z.matrix())) < 1e-15);
        assert!(TermLabel::coupling(Axis::Z, 1, 3).matrix(2).is_err());
    }

    #[test]
    fn term_sorted_and_displayed() {
        let t = Term::new(vec![TermLabel::field(Axis::X, 2), TermLabel::field(Axis::X, 1)]).unwrap();
        assert_eq!(t.to_string(), "pauli:x:(1)+pauli:x:(2)");
        assert_eq!(t.to_string().parse::<Term>().unwrap(), t);
        assert!(Term::new(vec![]).is_err());
    }
}
