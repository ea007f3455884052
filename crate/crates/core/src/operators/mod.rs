//! Pauli algebra, fermionic operators, the Jordan-Wigner map and dense
//! diagonalization.

pub mod fermion;
pub mod pauli;
pub mod qubit_operator;
pub mod spectrum;

pub use fermion::{jordan_wigner, number_operator, qubit_excitation_map, FermionOperator, Ladder};
pub use pauli::{pauli_multiply, Pauli, PauliString};
pub use qubit_operator::{commutator, QubitOperator, COEFF_TOLERANCE};
pub use spectrum::{exact_spectrum, exact_spectrum_with_limit, SpectrumResult, DEFAULT_DENSE_LIMIT};
