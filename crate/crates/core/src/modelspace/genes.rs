use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::model::Model;
use super::terms::{Term, TermLabel};
use crate::error::{QmlaError, Result};
use crate::hamiltonian::pauli::Axis;

/// Ordered term alphabet; gene `i` switches label `i` on or off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TermLabel>", into = "Vec<TermLabel>")]
pub struct GeneMap {
    labels: Vec<TermLabel>,
    n_qubits: usize,
}

impl TryFrom<Vec<TermLabel>> for GeneMap {
    type Error = QmlaError;
    fn try_from(labels: Vec<TermLabel>) -> Result<Self> {
        GeneMap::new(labels)
    }
}

impl From<GeneMap> for Vec<TermLabel> {
    fn from(g: GeneMap) -> Self {
        g.labels
    }
}

impl GeneMap {
    /// Labels must already be in canonical (sorted) order and distinct.
    pub fn new(labels: Vec<TermLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(QmlaError::Structural("empty gene map".into()));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QmlaError::Structural("gene map labels not in canonical order".into()));
        }
        let n_qubits = labels.iter().map(TermLabel::min_qubits).max().unwrap_or(1);
        Ok(Self { labels, n_qubits })
    }

    /// Every `σᵃσᵃ` coupling on the complete graph of `n_sites` sites:
    /// pairs in lexicographic order, axes x, y, z within a pair.
    pub fn xyz_complete(n_sites: usize) -> Result<Self> {
        let labels = (1..=n_sites)
            .flat_map(|k| ((k + 1)..=n_sites).map(move |l| (k, l)))
            .flat_map(|(k, l)| Axis::ALL.into_iter().map(move |a| TermLabel::coupling(a, k, l)))
            .collect();
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[TermLabel] {
        &self.labels
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn index_of(&self, label: &TermLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn contains(&self, label: &TermLabel) -> bool {
        self.index_of(label).is_some()
    }

    pub fn decode(&self, c: &Chromosome) -> Result<Model> {
        if c.len() != self.len() {
            return Err(QmlaError::ChromosomeLength {
                expected: self.len(),
                found: c.len(),
            });
        }
        let terms = c
            .bits()
            .iter()
            .zip(&self.labels)
            .filter(|(&b, _)| b)
            .map(|(_, &l)| Term::single(l))
            .collect();
        Model::new(terms, self.n_qubits)
    }

    /// Inverse of `decode` for models built from single-label terms of this alphabet.
    pub fn encode(&self, model: &Model) -> Result<Chromosome> {
        let mut bits = vec![false; self.len()];
        for term in model.terms() {
            let [label] = term.labels() else {
                return Err(QmlaError::NotInAlphabet(term.to_string()));
            };
            let i = self
                .index_of(label)
                .ok_or_else(|| QmlaError::NotInAlphabet(label.to_string()))?;
            bits[i] = true;
        }
        Ok(Chromosome::new(bits))
    }
}

/// Bitstring over a `GeneMap`; serialised as a string of `0`/`1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chromosome {
    bits: Vec<bool>,
}

impl Chromosome {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..n).map(|_| rng.random::<bool>()).collect(),
        }
    }

    /// Uniform over the `2^n − 1` chromosomes with at least one set bit.
    pub fn random_nonzero<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let c = Self::random(n, rng);
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for Chromosome {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(QmlaError::ParseChromosome(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bits })
    }
}

impl Serialize for Chromosome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Chromosome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_site_map_has_eighteen_genes() {
        let g = GeneMap::xyz_complete(4).unwrap();
        assert_eq!(g.len(), 18);
        assert_eq!(g.n_qubits(), 4);
        assert_eq!(g.labels()[0].to_string(), "pauli:x:(1,2)");
        assert_eq!(g.labels()[17].to_string(), "pauli:z:(3,4)");
    }

    #[test]
    fn decode_extremes() {
        let g = GeneMap::xyz_complete(4).unwrap();
        assert_eq!(g.decode(&Chromosome::zeros(18)).unwrap().cardinality(), 0);
        let all = Chromosome::new(vec![true; 18]);
        assert_eq!(g.decode(&all).unwrap().cardinality(), 18);
        assert!(g.decode(&Chromosome::zeros(17)).is_err());
    }

    #[test]
    fn chromosome_string_round_trip() {
        let c: Chromosome = "0110".parse().unwrap();
        assert_eq!(c.to_string(), "0110");
        assert_eq!(c.count_ones(), 2);
        assert!("01a".parse::<Chromosome>().is_err());
    }

    #[test]
    fn encode_rejects_foreign_labels() {
        let g = GeneMap::xyz_complete(3).unwrap();
        let m = Model::from_labels([TermLabel::field(Axis::X, 1)], 3).unwrap();
        assert!(matches!(g.encode(&m), Err(QmlaError::NotInAlphabet(_))));
    }

    #[test]
    fn gene_map_requires_canonical_order() {
        let a = TermLabel::coupling(Axis::X, 1, 2);
        let b = TermLabel::coupling(Axis::Y, 1, 2);
        assert!(GeneMap::new(vec![b, a]).is_err());
        assert!(GeneMap::new(vec![a, a]).is_err());
    }
}
