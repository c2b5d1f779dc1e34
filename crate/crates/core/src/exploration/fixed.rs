use serde::{Deserialize, Serialize};

use crate::error::{QmlaError, Result};
use crate::hamiltonian::{Family, LatticeSpec};
use crate::modelspace::{lattice_to_model, Model};

/// A prescribed set of lattices for one family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSet {
    pub family: Family,
    pub lattices: Vec<LatticeSpec>,
}

/// One model per lattice, forming a single branch.
pub fn fixed_set_generate(family: Family, lattices: &[LatticeSpec]) -> Result<Vec<Model>> {
    if lattices.is_empty() {
        return Err(QmlaError::Config(format!("{family} fixed set has no lattices")));
    }
    lattices.iter().map(|l| lattice_to_model(family, l)).collect()
}
