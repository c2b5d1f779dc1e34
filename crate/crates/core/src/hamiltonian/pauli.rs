use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{kron, ComplexMatrix, C64, I, ONE, ZERO};
use crate::error::{QmlaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let data = match self {
            Axis::X => vec![ZERO, ONE, ONE, ZERO],
            Axis::Y => vec![ZERO, -I, I, ZERO],
            Axis::Z => vec![ONE, ZERO, ZERO, C64::new(-1.0, 0.0)],
        };
        ComplexMatrix::from_row_major(2, data).expect("2x2 Pauli")
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = QmlaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(QmlaError::ParseTerm(other.to_string())),
        }
    }
}

/// Tensor product of single-qubit operators on `n_qubits` qubits.
///
/// `ops` holds `(qubit, operator)` pairs with 1-based qubit indices; qubit 1
/// is the leftmost Kronecker factor and unlisted qubits carry the identity.
pub fn operator_string(n_qubits: usize, ops: &[(usize, ComplexMatrix)]) -> Result<ComplexMatrix> {
    for (q, m) in ops {
        if *q == 0 || *q > n_qubits {
            return Err(QmlaError::Structural(format!(
                "qubit {q} outside 1..={n_qubits}"
            )));
        }
        if m.dim() != 2 {
            return Err(QmlaError::DimensionMismatch {
                expected: 2,
                found: m.dim(),
            });
        }
    }
    let mut out = ComplexMatrix::identity(1);
    for q in 1..=n_qubits {
        let factor = ops
            .iter()
            .find(|(idx, _)| *idx == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| ComplexMatrix::identity(2));
        out = kron(&out, &factor);
    }
    Ok(out)
}

pub fn pauli_string(n_qubits: usize, ops: &[(usize, Axis)]) -> Result<ComplexMatrix> {
    let ops: Vec<(usize, ComplexMatrix)> = ops.iter().map(|(q, a)| (*q, a.matrix())).collect();
    operator_string(n_qubits, &ops)
}
