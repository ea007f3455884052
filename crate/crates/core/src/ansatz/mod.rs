//! Ansatz elements, operator pools and fixed ansätze.

pub mod element;
pub mod fixed;
pub mod pool;

pub use element::{staircase_targets, Ansatz, AnsatzElement, PauliRotation};
pub use fixed::{build_kupccgsd, build_uccsd, upccgsd_block};
pub use pool::{
    build_fermionic_pool, build_qeb_pool, build_qubit_pool, excitation_element,
    reference_excitations, Excitation, Pool, PoolKind,
};
