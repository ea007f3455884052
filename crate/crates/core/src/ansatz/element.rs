use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{PauliString, QubitOperator};

/// Generator coefficients with larger real parts are not anti-Hermitian.
pub const ANTI_HERMITIAN_TOLERANCE: f64 = 1e-12;

/// One factor `exp(i * theta * coefficient * pauli)` of an element evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliRotation {
    pub pauli: PauliString,
    pub coefficient: f64,
}

/// `A(theta) = exp(theta T)` for an anti-Hermitian generator `T = sum_k i a_k P_k`
/// with mutually commuting strings, so the evolution factorizes exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzElement {
    generator: QubitOperator,
    label: String,
    rotations: Vec<PauliRotation>,
    cnot_schedule: Vec<(usize, usize)>,
}

/// Staircase CNOT targets of one Pauli rotation: every support qubit but the
/// lowest, twice each (ladder and its inverse).
pub fn staircase_targets(p: &PauliString) -> Vec<usize> {
    let support = p.support();
    support.iter().skip(1).copied().collect()
}

fn staircase_schedule(rotations: &[PauliRotation]) -> Vec<(usize, usize)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in rotations {
        for q in staircase_targets(&r.pauli) {
            *counts.entry(q).or_default() += 2;
        }
    }
    counts.into_iter().collect()
}

impl AnsatzElement {
    /// Validates the generator and derives the staircase CNOT schedule.
    pub fn new(generator: QubitOperator, label: impl Into<String>) -> Result<Self> {
        let generator = generator.simplified();
        let residue = generator.anti_hermitian_residue();
        if residue > ANTI_HERMITIAN_TOLERANCE {
            return Err(Error::NonAntiHermitian { residue });
        }
        if generator.is_empty() {
            return Err(Error::InvalidArgument("empty generator".into()));
        }
        if !generator.terms_commute() {
            return Err(Error::NonCommutingTerms);
        }
        let rotations: Vec<PauliRotation> = generator
            .terms()
            .filter(|(p, _)| !p.is_identity())
            .map(|(p, c)| PauliRotation {
                pauli: *p,
                coefficient: c.im,
            })
            .collect();
        let cnot_schedule = staircase_schedule(&rotations);
        Ok(Self {
            generator,
            label: label.into(),
            rotations,
            cnot_schedule,
        })
    }

    /// Replaces the CNOT-target schedule used by element-by-element noise,
    /// e.g. with the counts of a more economical circuit for the same unitary.
    pub fn with_cnot_schedule(mut self, schedule: Vec<(usize, usize)>) -> Result<Self> {
        let n = self.generator.n_qubits();
        if let Some(&(q, _)) = schedule.iter().find(|(q, _)| *q >= n) {
            return Err(Error::Dimension(format!("scheduled qubit {q} out of range")));
        }
        self.cnot_schedule = schedule;
        Ok(self)
    }

    pub fn relabeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn generator(&self) -> &QubitOperator {
        &self.generator
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_qubits(&self) -> usize {
        self.generator.n_qubits()
    }

    pub fn rotations(&self) -> &[PauliRotation] {
        &self.rotations
    }

    /// `(qubit, number of times it is a CNOT target)`, ascending in qubit.
    pub fn cnot_schedule(&self) -> &[(usize, usize)] {
        &self.cnot_schedule
    }

    pub fn scheduled_cnots(&self) -> usize {
        self.cnot_schedule.iter().map(|(_, c)| c).sum()
    }

    /// CNOTs of the staircase compilation: `2 (w - 1)` per weight-`w` term.
    pub fn staircase_cnots(&self) -> usize {
        self.rotations
            .iter()
            .map(|r| 2 * r.pauli.weight().saturating_sub(1))
            .sum()
    }
}

/// Ordered list of elements; element `k` owns parameter slot `k` and
/// `U = A_n ... A_1` acts on the reference with element 0 first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    elements: Vec<AnsatzElement>,
}

impl Ansatz {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            elements: Vec::new(),
        }
    }

    pub fn from_elements(n_qubits: usize, elements: Vec<AnsatzElement>) -> Result<Self> {
        let mut a = Self::new(n_qubits);
        for e in elements {
            a.push(e)?;
        }
        Ok(a)
    }

    pub fn push(&mut self, element: AnsatzElement) -> Result<()> {
        if element.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit element in {}-qubit ansatz",
                element.n_qubits(),
                self.n_qubits
            )));
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn n_params(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[AnsatzElement] {
        &self.elements
    }

    /// The first `m` elements (clamped to the length).
    pub fn prefix(&self, m: usize) -> Ansatz {
        Ansatz {
            n_qubits: self.n_qubits,
            elements: self.elements[..m.min(self.elements.len())].to_vec(),
        }
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params() {
            return Err(Error::Dimension(format!(
                "{} parameters for an ansatz with {} elements",
                params.len(),
                self.n_params()
            )));
        }
        if let Some(x) = params.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite parameter {x}")));
        }
        Ok(())
    }
}
