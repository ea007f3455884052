//! Integral ingestion and Hamiltonian assembly.

pub mod fcidump;
pub mod hamiltonian;

pub use fcidump::{parse_fcidump, read_fcidump, MolecularIntegrals};
pub use hamiltonian::{build_hamiltonian, freeze_orbitals, ActiveSpaceHamiltonian, FrozenCoreSpec};
