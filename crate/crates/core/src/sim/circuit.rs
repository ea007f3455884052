//! Ansatz compilation and noisy circuit execution.

use serde::{Deserialize, Serialize};

use super::gates::{Axis, GateOp};
use super::noise::{NoiseModel, NoiseScheme};
use super::state::{Backend, QuantumState, DEFAULT_DENSITY_LIMIT};
use crate::ansatz::{Ansatz, AnsatzElement};
use crate::error::{Error, Result};
use crate::operators::Pauli;

/// Occupation-number basis state used as the circuit input; bit `i` set
/// means spin-orbital (qubit) `i` is occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Occupation {
    pub n_qubits: usize,
    pub bits: usize,
}

impl Occupation {
    pub fn new(n_qubits: usize, bits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 || bits >= 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "occupation {bits:#b} does not fit {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, bits })
    }

    /// Lowest `n_electrons` spin-orbitals occupied.
    pub fn hartree_fock(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        if n_electrons > n_qubits {
            return Err(Error::InvalidArgument(format!(
                "{n_electrons} electrons do not fit {n_qubits} spin-orbitals"
            )));
        }
        Self::new(n_qubits, (1usize << n_electrons) - 1)
    }

    pub fn n_electrons(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        self.bits >> mode & 1 == 1
    }
}

/// Simulator settings that are not part of the noise model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    /// Qubit limit for the density backend (capped at 14).
    pub density_limit: usize,
    /// Use the density backend even for noiseless runs.
    pub force_density: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            density_limit: DEFAULT_DENSITY_LIMIT,
            force_density: false,
        }
    }
}

/// Staircase realisation of `exp(theta T)`: for each term `exp(i phi P)`,
/// basis changes onto Z, a CNOT ladder onto the highest support qubit, one
/// `Rz(-2 phi)` and the mirrored ladder and basis changes.
pub fn compile_element(element: &AnsatzElement, theta: f64) -> Vec<GateOp> {
    let mut gates = Vec::new();
    for rot in element.rotations() {
        let phi = theta * rot.coefficient;
        let factors = rot.pauli.factors();
        let basis = |gates: &mut Vec<GateOp>, adjoint: bool| {
            for &(q, p) in &factors {
                match p {
                    Pauli::X => gates.push(GateOp::Hadamard(q)),
                    Pauli::Y => gates.push(GateOp::SqrtX { qubit: q, adjoint }),
                    Pauli::Z => {}
                }
            }
        };
        basis(&mut gates, false);
        let support: Vec<usize> = factors.iter().map(|&(q, _)| q).collect();
        for w in support.windows(2) {
            gates.push(GateOp::Cnot {
                control: w[0],
                target: w[1],
            });
        }
        let top = *support.last().expect("non-identity rotation");
        gates.push(GateOp::Rotation {
            axis: Axis::Z,
            angle: -2.0 * phi,
            qubit: top,
        });
        for w in support.windows(2).rev() {
            gates.push(GateOp::Cnot {
                control: w[0],
                target: w[1],
            });
        }
        basis(&mut gates, true);
    }
    gates
}

/// Gate list of the whole ansatz, element 0 first.
pub fn compile_ansatz(ansatz: &Ansatz, params: &[f64]) -> Result<Vec<GateOp>> {
    ansatz.check_params(params)?;
    Ok(ansatz
        .elements()
        .iter()
        .zip(params)
        .flat_map(|(e, &t)| compile_element(e, t))
        .collect())
}

/// `N_II`: total CNOTs of the staircase compilation.
pub fn cnot_count(ansatz: &Ansatz) -> usize {
    ansatz.elements().iter().map(|e| e.staircase_cnots()).sum()
}

/// Number of depolarizing channels a scheme attaches to the circuit.
pub fn noisy_location_count(ansatz: &Ansatz, scheme: NoiseScheme) -> usize {
    match scheme {
        NoiseScheme::GateByGate => cnot_count(ansatz),
        NoiseScheme::ElementByElement => ansatz.elements().iter().map(|e| e.scheduled_cnots()).sum(),
    }
}

/// Exact `exp(theta T)` via its commuting Pauli factors.
pub fn apply_element_exact(state: &mut QuantumState, element: &AnsatzElement, theta: f64) -> Result<()> {
    for rot in element.rotations() {
        state.apply_pauli_rotation(&rot.pauli, theta * rot.coefficient)?;
    }
    Ok(())
}

/// Applies one element under the given noise (effective probability `p`).
pub fn apply_element_noisy(
    state: &mut QuantumState,
    element: &AnsatzElement,
    theta: f64,
    scheme: NoiseScheme,
    p: f64,
) -> Result<()> {
    if p == 0.0 {
        return apply_element_exact(state, element, theta);
    }
    if state.backend() != Backend::Density {
        return Err(Error::UnsupportedBackend("vector"));
    }
    match scheme {
        NoiseScheme::GateByGate => {
            for g in compile_element(element, theta) {
                state.apply_gate(&g)?;
                if let Some(t) = g.noisy_target() {
                    state.apply_depolarizing(t, p)?;
                }
            }
        }
        NoiseScheme::ElementByElement => {
            apply_element_exact(state, element, theta)?;
            for &(q, count) in element.cnot_schedule() {
                for _ in 0..count {
                    state.apply_depolarizing(q, p)?;
                }
            }
        }
    }
    Ok(())
}

/// Evolves `state` in place through the ansatz.
pub fn evolve(
    state: &mut QuantumState,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
) -> Result<()> {
    ansatz.check_params(params)?;
    if state.n_qubits() != ansatz.n_qubits() {
        return Err(Error::Dimension(format!(
            "{}-qubit ansatz on a {}-qubit state",
            ansatz.n_qubits(),
            state.n_qubits()
        )));
    }
    let p = noise.effective_p()?;
    for (e, &theta) in ansatz.elements().iter().zip(params) {
        apply_element_noisy(state, e, theta, noise.scheme, p)?;
    }
    state.check_trace()
}

/// Prepares the reference and runs the ansatz. A noisy model (or
/// `force_density`) selects the density backend, otherwise the vector backend.
pub fn run_circuit_with(
    initial: &Occupation,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    options: &SimOptions,
) -> Result<QuantumState> {
    let p = noise.effective_p()?;
    let mut state = if p > 0.0 || options.force_density {
        QuantumState::basis_density(initial.n_qubits, initial.bits, options.density_limit)?
    } else {
        QuantumState::basis_vector(initial.n_qubits, initial.bits)?
    };
    evolve(&mut state, ansatz, params, noise)?;
    Ok(state)
}

pub fn run_circuit(
    initial: &Occupation,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
) -> Result<QuantumState> {
    run_circuit_with(initial, ansatz, params, noise, &SimOptions::default())
}
