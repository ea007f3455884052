//! Linear response of the energy to depolarizing noise from pure-state
//! Pauli-insertion runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::CHEMICAL_ACCURACY;
use crate::ansatz::Ansatz;
use crate::error::Result;
use crate::operators::{Pauli, QubitOperator};
use crate::sim::{apply_element_exact, compile_element, NoiseScheme, Occupation, QuantumState};

/// Energy shift from one Pauli inserted at one noisy location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fluctuation {
    /// Gate index in the compiled circuit (gate by gate) or element index
    /// (element by element).
    pub position: usize,
    pub qubit: usize,
    pub pauli: Pauli,
    /// `E_perturbed - E_U`.
    pub delta: f64,
    /// Channels this location stands for.
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusceptibilityReport {
    pub scheme: NoiseScheme,
    /// `d Delta E / dp` at `p = 0`.
    pub chi: f64,
    /// Average fluctuation; `None` for a circuit without noisy locations.
    pub delta_e: Option<f64>,
    pub n_ii: usize,
    /// Noiseless energy of the circuit.
    pub energy: f64,
    pub fluctuations: Vec<Fluctuation>,
}

/// Noiseless state snapshot taken at a noisy location.
struct Location {
    position: usize,
    element: usize,
    /// Index of the next gate of `element` to apply (gate by gate only).
    next_gate: Option<usize>,
    qubit: usize,
    weight: usize,
    state: QuantumState,
}

/// `chi = delta_E * N_II` with `delta_E` the mean energy shift over every
/// noisy location and each of X, Y, Z.
pub fn noise_susceptibility(
    ansatz: &Ansatz,
    params: &[f64],
    h: &QubitOperator,
    reference: &Occupation,
    scheme: NoiseScheme,
) -> Result<SusceptibilityReport> {
    ansatz.check_params(params)?;
    let mut state = QuantumState::basis_vector(reference.n_qubits, reference.bits)?;
    let mut locations = Vec::new();
    let mut position = 0;
    for (ei, (element, &theta)) in ansatz.elements().iter().zip(params).enumerate() {
        match scheme {
            NoiseScheme::GateByGate => {
                for (gi, gate) in compile_element(element, theta).iter().enumerate() {
                    state.apply_gate(gate)?;
                    if let Some(qubit) = gate.noisy_target() {
                        locations.push(Location {
                            position,
                            element: ei,
                            next_gate: Some(gi + 1),
                            qubit,
                            weight: 1,
                            state: state.clone(),
                        });
                    }
                    position += 1;
                }
            }
            NoiseScheme::ElementByElement => {
                apply_element_exact(&mut state, element, theta)?;
                for &(qubit, weight) in element.cnot_schedule() {
                    locations.push(Location {
                        position: ei,
                        element: ei,
                        next_gate: None,
                        qubit,
                        weight,
                        state: state.clone(),
                    });
                }
            }
        }
    }
    let energy = state.expectation(h)?;

    let per_location: Vec<Vec<Fluctuation>> = locations
        .par_iter()
        .map(|loc| {
            Pauli::ALL
                .iter()
                .map(|&pauli| {
                    let mut s = loc.state.clone();
                    s.apply_pauli(loc.qubit, pauli)?;
                    if let Some(next) = loc.next_gate {
                        let e = &ansatz.elements()[loc.element];
                        for gate in &compile_element(e, params[loc.element])[next..] {
                            s.apply_gate(gate)?;
                        }
                    }
                    for k in loc.element + 1..ansatz.len() {
                        apply_element_exact(&mut s, &ansatz.elements()[k], params[k])?;
                    }
                    Ok(Fluctuation {
                        position: loc.position,
                        qubit: loc.qubit,
                        pauli,
                        delta: s.expectation(h)? - energy,
                        weight: loc.weight,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let fluctuations: Vec<Fluctuation> = per_location.into_iter().flatten().collect();

    let n_ii: usize = locations.iter().map(|l| l.weight).sum();
    if n_ii == 0 {
        return Ok(SusceptibilityReport {
            scheme,
            chi: 0.0,
            delta_e: None,
            n_ii,
            energy,
            fluctuations,
        });
    }
    let total: f64 = fluctuations.iter().map(|f| f.weight as f64 * f.delta).sum();
    let delta_e = total / (3.0 * n_ii as f64);
    Ok(SusceptibilityReport {
        scheme,
        chi: delta_e * n_ii as f64,
        delta_e: Some(delta_e),
        n_ii,
        energy,
        fluctuations,
    })
}

/// Outcome of the linear `p_c` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PcEstimate {
    Reachable { p_c: f64 },
    /// The noiseless residual already misses chemical accuracy.
    Unreachable { residual: f64 },
    /// Noise does not raise the energy to first order.
    NonPositiveChi { chi: f64 },
}

impl PcEstimate {
    pub fn value(&self) -> Option<f64> {
        match *self {
            PcEstimate::Reachable { p_c } => Some(p_c),
            _ => None,
        }
    }
}

/// `p_c = (Delta E_C - residual) / chi`, clamped to `[0, 1]`.
pub fn estimate_pc(report: &SusceptibilityReport, residual_accuracy: f64) -> PcEstimate {
    if residual_accuracy >= CHEMICAL_ACCURACY {
        return PcEstimate::Unreachable {
            residual: residual_accuracy,
        };
    }
    if report.chi <= 0.0 {
        return PcEstimate::NonPositiveChi { chi: report.chi };
    }
    PcEstimate::Reachable {
        p_c: ((CHEMICAL_ACCURACY - residual_accuracy) / report.chi).clamp(0.0, 1.0),
    }
}
