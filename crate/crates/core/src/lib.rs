//! Noisy simulation of ADAPT-VQE and fixed-ansatz VQEs, with linear-response
//! noise susceptibility, noise sweeps, optimal truncation and zero-noise
//! extrapolation.

pub mod adapt;
pub mod analysis;
pub mod ansatz;
pub mod chem;
pub mod error;
pub mod operators;
pub mod problem;
pub mod sim;

pub use adapt::{adapt_run, AdaptConfig, AdaptRecord, AdaptStatus, DecisionRule, OptimizerKind};
pub use analysis::{SusceptibilityReport, SweepTable};
pub use ansatz::{Ansatz, AnsatzElement, Pool, PoolKind};
pub use chem::{FrozenCoreSpec, MolecularIntegrals};
pub use error::{Error, Result};
pub use operators::{FermionOperator, PauliString, QubitOperator, SpectrumResult};
pub use problem::{bundled, MolecularProblem};
pub use sim::{GateOp, NoiseModel, NoiseScheme, QuantumState};
