use serde::{Deserialize, Serialize};

use super::fixed::FixedSet;
use super::genetic::GaConfig;
use crate::comparison::ComparisonStrategy;
use crate::error::{QmlaError, Result};
use crate::hamiltonian::Family;
use crate::modelspace::{GeneMap, TermLabel};
use crate::qhl::QhlConfig;

/// How the GA term alphabet is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneMapSpec {
    /// All `σᵃσᵃ` couplings on the complete graph of `n_sites` sites.
    XyzComplete { n_sites: usize },
    Labels { labels: Vec<TermLabel> },
}

impl GeneMapSpec {
    pub fn build(&self) -> Result<GeneMap> {
        match self {
            GeneMapSpec::XyzComplete { n_sites } => GeneMap::xyz_complete(*n_sites),
            GeneMapSpec::Labels { labels } => {
                let mut sorted = labels.clone();
                sorted.sort();
                GeneMap::new(sorted)
            }
        }
    }
}

/// One exploration strategy of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategyConfig {
    FixedSet {
        family: Family,
        lattices: Vec<crate::hamiltonian::LatticeSpec>,
        #[serde(default)]
        comparison: ComparisonStrategy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qhl: Option<QhlConfig>,
    },
    FamilyForest {
        trees: Vec<FixedSet>,
        #[serde(default)]
        comparison: ComparisonStrategy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qhl: Option<QhlConfig>,
    },
    Genetic {
        gene_map: GeneMapSpec,
        #[serde(default)]
        ga: GaConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        qhl: Option<QhlConfig>,
    },
}

impl StrategyConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            StrategyConfig::FixedSet { .. } => "fixed-set",
            StrategyConfig::FamilyForest { .. } => "family-forest",
            StrategyConfig::Genetic { .. } => "genetic",
        }
    }

    pub fn qhl_override(&self) -> Option<&QhlConfig> {
        match self {
            StrategyConfig::FixedSet { qhl, .. }
            | StrategyConfig::FamilyForest { qhl, .. }
            | StrategyConfig::Genetic { qhl, .. } => qhl.as_ref(),
        }
    }

    /// Largest register any candidate of this strategy acts on.
    pub fn max_qubits(&self) -> Result<usize> {
        let fixed = |family: Family, lattices: &[crate::hamiltonian::LatticeSpec]| {
            lattices.iter().map(|l| family.n_qubits(l)).max().unwrap_or(0)
        };
        Ok(match self {
            StrategyConfig::FixedSet { family, lattices, .. } => fixed(*family, lattices),
            StrategyConfig::FamilyForest { trees, .. } => {
                trees.iter().map(|t| fixed(t.family, &t.lattices)).max().unwrap_or(0)
            }
            StrategyConfig::Genetic { gene_map, .. } => gene_map.build()?.n_qubits(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategyConfig::FixedSet { family, lattices, .. } => {
                if lattices.is_empty() {
                    return Err(QmlaError::Config(format!("{family} fixed set has no lattices")));
                }
            }
            StrategyConfig::FamilyForest { trees, .. } => {
                if trees.len() < 2 {
                    return Err(QmlaError::Config("family forest needs at least two trees".into()));
                }
                if trees.iter().any(|t| t.lattices.is_empty()) {
                    return Err(QmlaError::Config("family forest tree without lattices".into()));
                }
            }
            StrategyConfig::Genetic { gene_map, ga, .. } => ga.validate(gene_map.build()?.len())?,
        }
        if let Some(q) = self.qhl_override() {
            q.validate()?;
        }
        Ok(())
    }
}
