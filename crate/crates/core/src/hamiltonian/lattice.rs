use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{QmlaError, Result};

/// Sites `1..=n_sites` and a set of unordered couplings between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLattice")]
pub struct LatticeSpec {
    label: String,
    n_sites: usize,
    couplings: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawLattice {
    label: String,
    n_sites: usize,
    #[serde(default)]
    couplings: Vec<(usize, usize)>,
}

impl TryFrom<RawLattice> for LatticeSpec {
    type Error = QmlaError;
    fn try_from(raw: RawLattice) -> Result<Self> {
        LatticeSpec::new(raw.label, raw.n_sites, raw.couplings)
    }
}

impl LatticeSpec {
    /// Validates and canonicalises: each pair becomes `(k, l)` with `k < l`,
    /// pairs are sorted, duplicates and self-couplings are rejected.
    pub fn new(label: impl Into<String>, n_sites: usize, couplings: Vec<(usize, usize)>) -> Result<Self> {
        let label = label.into();
        if n_sites == 0 {
            return Err(QmlaError::InvalidLattice(format!("{label}: no sites")));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &couplings {
            let (k, l) = if a < b { (a, b) } else { (b, a) };
            if k == l {
                return Err(QmlaError::InvalidLattice(format!("{label}: self-coupling at site {k}")));
            }
            if k == 0 || l > n_sites {
                return Err(QmlaError::InvalidLattice(format!(
                    "{label}: pair ({a},{b}) outside sites 1..={n_sites}"
                )));
            }
            if !seen.insert((k, l)) {
                return Err(QmlaError::InvalidLattice(format!("{label}: duplicate pair ({k},{l})")));
            }
        }
        Ok(Self {
            label,
            n_sites,
            couplings: seen.into_iter().collect(),
        })
    }

    pub fn chain(n_sites: usize) -> Result<Self> {
        let pairs = (1..n_sites).map(|k| (k, k + 1)).collect();
        Self::new(format!("chain-{n_sites}"), n_sites, pairs)
    }

    pub fn ring(n_sites: usize) -> Result<Self> {
        if n_sites < 3 {
            return Err(QmlaError::InvalidLattice(format!("ring needs 3 sites, got {n_sites}")));
        }
        let mut pairs: Vec<_> = (1..n_sites).map(|k| (k, k + 1)).collect();
        pairs.push((1, n_sites));
        Self::new(format!("ring-{n_sites}"), n_sites, pairs)
    }

    pub fn complete(n_sites: usize) -> Result<Self> {
        let pairs = (1..=n_sites)
            .flat_map(|k| ((k + 1)..=n_sites).map(move |l| (k, l)))
            .collect();
        Self::new(format!("complete-{n_sites}"), n_sites, pairs)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> &[(usize, usize)] {
        &self.couplings
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalises_pairs() {
        let l = LatticeSpec::new("t", 3, vec![(3, 2), (1, 2)]).unwrap();
        assert_eq!(l.couplings(), &[(1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_invalid() {
        assert!(LatticeSpec::new("t", 3, vec![(1, 1)]).is_err());
        assert!(LatticeSpec::new("t", 3, vec![(1, 4)]).is_err());
        assert!(LatticeSpec::new("t", 3, vec![(1, 2), (2, 1)]).is_err());
        assert!(LatticeSpec::new("t", 0, vec![]).is_err());
    }

    #[test]
    fn standard_shapes() {
        assert_eq!(LatticeSpec::chain(4).unwrap().couplings().len(), 3);
        assert_eq!(LatticeSpec::ring(4).unwrap().couplings().len(), 4);
        assert_eq!(LatticeSpec::complete(4).unwrap().couplings().len(), 6);
    }

    #[test]
    fn deserialisation_validates() {
        let ok: LatticeSpec =
            serde_json::from_str(r#"{"label":"a","n_sites":2,"couplings":[[2,1]]}"#).unwrap();
        assert_eq!(ok.couplings(), &[(1, 2)]);
        let bad = serde_json::from_str::<LatticeSpec>(r#"{"label":"a","n_sites":2,"couplings":[[1,3]]}"#);
        assert!(bad.is_err());
    }
}
