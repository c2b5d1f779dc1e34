//! Jordan-Wigner encoding of fermionic modes onto qubits.
//!
//! Mode `m` (0-based) lives on qubit `m + 1`; occupation `|1>` is the
//! occupied state, and every lower-indexed mode contributes a `Z` parity
//! factor. Hubbard modes are ordered site-major with spin-up first:
//! `(1,↑), (1,↓), (2,↑), ...`.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, ONE};
use super::pauli::{operator_string, Axis};
use crate::error::{QmlaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// 0-based mode index for `(site, spin)` with 1-based sites.
pub fn hubbard_mode(site: usize, spin: Spin) -> usize {
    2 * (site - 1)
        + match spin {
            Spin::Up => 0,
            Spin::Down => 1,
        }
}

pub fn jordan_wigner_ladder(mode: usize, n_modes: usize, kind: Ladder) -> Result<ComplexMatrix> {
    if mode >= n_modes {
        return Err(QmlaError::ModeOutOfRange {
            index: mode,
            n_modes,
        });
    }
    let mut local = ComplexMatrix::zeros(2);
    match kind {
        // |1><0|
        Ladder::Create => local.set(1, 0, ONE),
        // |0><1|
        Ladder::Annihilate => local.set(0, 1, ONE),
    }
    let mut ops: Vec<(usize, ComplexMatrix)> = (0..mode).map(|m| (m + 1, Axis::Z.matrix())).collect();
    ops.push((mode + 1, local));
    operator_string(n_modes, &ops)
}

pub fn number_operator(mode: usize, n_modes: usize) -> Result<ComplexMatrix> {
    let c_dag = jordan_wigner_ladder(mode, n_modes, Ladder::Create)?;
    let c = jordan_wigner_ladder(mode, n_modes, Ladder::Annihilate)?;
    Ok(c_dag.matmul(&c))
}

/// `c†_b c_a + c†_a c_b`.
pub fn hopping(mode_a: usize, mode_b: usize, n_modes: usize) -> Result<ComplexMatrix> {
    let cd_a = jordan_wigner_ladder(mode_a, n_modes, Ladder::Create)?;
    let c_a = jordan_wigner_ladder(mode_a, n_modes, Ladder::Annihilate)?;
    let cd_b = jordan_wigner_ladder(mode_b, n_modes, Ladder::Create)?;
    let c_b = jordan_wigner_ladder(mode_b, n_modes, Ladder::Annihilate)?;
    Ok(&cd_b.matmul(&c_a) + &cd_a.matmul(&c_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::matrix::ZERO;

    #[test]
    fn single_mode_creation() {
        let c = jordan_wigner_ladder(0, 1, Ladder::Create).unwrap();
        let expected = ComplexMatrix::from_row_major(2, vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn out_of_range_mode() {
        assert!(matches!(
            jordan_wigner_ladder(4, 4, Ladder::Create),
            Err(QmlaError::ModeOutOfRange { index: 4, n_modes: 4 })
        ));
    }

    #[test]
    fn annihilator_is_adjoint_of_creator() {
        for m in 0..3 {
            let cd = jordan_wigner_ladder(m, 3, Ladder::Create).unwrap();
            let c = jordan_wigner_ladder(m, 3, Ladder::Annihilate).unwrap();
            assert_eq!(cd.adjoint(), c);
        }
    }

    #[test]
    fn onsite_pair_on_one_site() {
        let n_up = number_operator(hubbard_mode(1, Spin::Up), 2).unwrap();
        let n_dn = number_operator(hubbard_mode(1, Spin::Down), 2).unwrap();
        let onsite = n_up.matmul(&n_dn);
        assert_eq!(onsite, ComplexMatrix::diagonal(&[0.0, 0.0, 0.0, 1.0]).unwrap());
    }

    #[test]
    fn mode_ordering() {
        assert_eq!(hubbard_mode(1, Spin::Up), 0);
        assert_eq!(hubbard_mode(1, Spin::Down), 1);
        assert_eq!(hubbard_mode(3, Spin::Down), 5);
    }
}
