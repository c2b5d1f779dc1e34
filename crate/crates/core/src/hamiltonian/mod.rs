//! Complex linear algebra and lattice Hamiltonian construction.
//!
//! All functions are pure; nothing here holds shared state.

pub mod eigen;
pub mod family;
pub mod jordan_wigner;
pub mod lattice;
pub mod matrix;
pub mod pauli;

pub use eigen::{expm_unitary, likelihood_p0, survival_from_weights, HermitianEigen};
pub use family::{build_family_terms, Family};
pub use jordan_wigner::{hopping, hubbard_mode, jordan_wigner_ladder, number_operator, Ladder, Spin};
pub use lattice::LatticeSpec;
pub use matrix::{kron, ComplexMatrix, StateVector, C64};
pub use pauli::{pauli_string, Axis};
