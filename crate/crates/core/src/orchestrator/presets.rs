//! Named run configurations at desk scale, plus larger GA variants.

use std::fmt;
use std::str::FromStr;

use super::config::{RunConfig, TruthSpec};
use crate::comparison::ComparisonStrategy;
use crate::error::{QmlaError, Result};
use crate::exploration::{FixedSet, GaConfig, GeneMapSpec, StrategyConfig};
use crate::hamiltonian::{Family, LatticeSpec};
use crate::modelspace::Chromosome;
use crate::qhl::QhlConfig;

/// Four-site XYZ truth used by the GA presets.
pub const GA_TRUTH_CHROMOSOME: &str = "011001010110100101";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2Ising,
    Fig2Heisenberg,
    Fig2Hubbard,
    Fig3Family,
    Fig4Ga,
    /// 60 models per generation, 32 generations.
    Fig4GaLarge,
    /// 60 models per generation, 15 generations.
    Fig4GaShort,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Fig2Ising,
        Preset::Fig2Heisenberg,
        Preset::Fig2Hubbard,
        Preset::Fig3Family,
        Preset::Fig4Ga,
        Preset::Fig4GaLarge,
        Preset::Fig4GaShort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2Ising => "fig2-ising",
            Preset::Fig2Heisenberg => "fig2-heisenberg",
            Preset::Fig2Hubbard => "fig2-hubbard",
            Preset::Fig3Family => "fig3-family",
            Preset::Fig4Ga => "fig4-ga",
            Preset::Fig4GaLarge => "fig4-ga-large",
            Preset::Fig4GaShort => "fig4-ga-short",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = QmlaError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| QmlaError::Config(format!("unknown preset {s:?}")))
    }
}

/// Spin lattices of up to four sites.
pub fn spin_lattices() -> Result<Vec<LatticeSpec>> {
    Ok(vec![
        LatticeSpec::chain(2)?,
        LatticeSpec::chain(3)?,
        LatticeSpec::ring(3)?,
        LatticeSpec::chain(4)?,
        LatticeSpec::ring(4)?,
        LatticeSpec::complete(4)?,
    ])
}

/// Hubbard lattices of up to three sites (six qubits).
pub fn hubbard_lattices() -> Result<Vec<LatticeSpec>> {
    Ok(vec![LatticeSpec::chain(2)?, LatticeSpec::chain(3)?, LatticeSpec::ring(3)?])
}

fn fixed(family: Family, truth: LatticeSpec, lattices: Vec<LatticeSpec>, seed: u64) -> RunConfig {
    let mut c = RunConfig::new(
        seed,
        TruthSpec::Family {
            family,
            lattice: truth,
            parameters: None,
        },
        vec![StrategyConfig::FixedSet {
            family,
            lattices,
            comparison: ComparisonStrategy::default(),
            qhl: None,
        }],
    );
    c.qhl = QhlConfig::new(250, 1000);
    c
}

fn genetic(n_models: usize, n_generations: usize, seed: u64) -> Result<RunConfig> {
    let gene_map = GeneMapSpec::XyzComplete { n_sites: 4 };
    let ga = GaConfig {
        n_models,
        n_generations,
        ..GaConfig::default()
    };
    let mut c = RunConfig::new(
        seed,
        TruthSpec::Chromosome {
            gene_map: gene_map.clone(),
            chromosome: GA_TRUTH_CHROMOSOME.parse::<Chromosome>()?,
            parameters: None,
        },
        vec![StrategyConfig::Genetic { gene_map, ga, qhl: None }],
    );
    c.qhl = QhlConfig::new(100, 500);
    Ok(c)
}

/// Builds the configuration for a preset.
pub fn preset(p: Preset, seed: u64) -> Result<RunConfig> {
    let config = match p {
        Preset::Fig2Ising => fixed(Family::Ising, LatticeSpec::chain(3)?, spin_lattices()?, seed),
        Preset::Fig2Heisenberg => fixed(Family::Heisenberg, LatticeSpec::ring(4)?, spin_lattices()?, seed),
        Preset::Fig2Hubbard => fixed(Family::Hubbard, LatticeSpec::chain(2)?, hubbard_lattices()?, seed),
        Preset::Fig3Family => {
            let trees = vec![
                FixedSet {
                    family: Family::Ising,
                    lattices: vec![LatticeSpec::chain(3)?],
                },
                FixedSet {
                    family: Family::Heisenberg,
                    lattices: vec![LatticeSpec::chain(3)?],
                },
                FixedSet {
                    family: Family::Hubbard,
                    lattices: vec![LatticeSpec::chain(2)?],
                },
            ];
            let mut c = RunConfig::new(
                seed,
                TruthSpec::Family {
                    family: Family::Ising,
                    lattice: LatticeSpec::chain(3)?,
                    parameters: None,
                },
                vec![StrategyConfig::FamilyForest {
                    trees,
                    comparison: ComparisonStrategy::default(),
                    qhl: None,
                }],
            );
            c.qhl = QhlConfig::new(200, 800);
            c
        }
        Preset::Fig4Ga => genetic(12, 16, seed)?,
        Preset::Fig4GaLarge => genetic(60, 32, seed)?,
        Preset::Fig4GaShort => genetic(60, 15, seed)?,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for p in Preset::ALL {
            let c = preset(p, 1).unwrap();
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            assert!(c.max_qubits().unwrap() <= 6);
        }
    }

    #[test]
    fn ga_truth_has_nine_terms() {
        let c = preset(Preset::Fig4Ga, 0).unwrap();
        assert_eq!(c.truth.structure().unwrap().cardinality(), 9);
    }
}
