//! State-vector and density-matrix simulation with depolarizing noise.

pub mod circuit;
pub mod gates;
mod kernels;
pub mod noise;
pub mod state;

pub use circuit::{
    apply_element_exact, apply_element_noisy, cnot_count, compile_ansatz, compile_element,
    evolve, noisy_location_count, run_circuit, run_circuit_with, Occupation, SimOptions,
};
pub use gates::{Axis, GateOp};
pub use noise::{NoiseModel, NoiseScheme};
pub use state::{expectation, Backend, QuantumState, DEFAULT_DENSITY_LIMIT, HARD_DENSITY_LIMIT};
