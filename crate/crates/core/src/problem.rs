use std::path::Path;

use num_complex::Complex64;

use crate::chem::{build_hamiltonian, parse_fcidump, MolecularIntegrals, FrozenCoreSpec};
use crate::error::{Error, Result};
use crate::operators::{exact_spectrum_with_limit, jordan_wigner, QubitOperator, DEFAULT_DENSE_LIMIT};
use crate::sim::Occupation;

/// Qubit Hamiltonian (core energy included as the identity coefficient),
/// the Hartree-Fock reference and the exact energies it is judged against.
#[derive(Debug, Clone)]
pub struct MolecularProblem {
    pub label: String,
    pub hamiltonian: QubitOperator,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub core_energy: f64,
    pub reference: Occupation,
    pub fci_energy: f64,
    pub max_energy: f64,
}

impl MolecularProblem {
    pub fn from_integrals(
        label: impl Into<String>,
        ints: &MolecularIntegrals,
        frozen: &FrozenCoreSpec,
        dense_limit: usize,
    ) -> Result<Self> {
        let active = build_hamiltonian(ints, frozen)?;
        let n = active.n_spin_orbitals;
        if n == 0 {
            return Err(Error::InvalidArgument("empty active space".into()));
        }
        let mut h = jordan_wigner(&active.operator, n)?;
        h.add_term(
            crate::operators::PauliString::identity(n),
            Complex64::new(active.core_energy, 0.0),
        );
        let h = h.simplified();
        let spectrum = exact_spectrum_with_limit(&h, dense_limit)?;
        let reference = Occupation::hartree_fock(n, active.n_electrons)?;
        Ok(Self {
            label: label.into(),
            hamiltonian: h,
            n_qubits: n,
            n_electrons: active.n_electrons,
            core_energy: active.core_energy,
            reference,
            fci_energy: spectrum.ground_energy,
            max_energy: spectrum.max_energy,
        })
    }

    pub fn from_fcidump_text(label: impl Into<String>, text: &str, frozen: &FrozenCoreSpec) -> Result<Self> {
        let ints = parse_fcidump(text)?;
        Self::from_integrals(label, &ints, frozen, DEFAULT_DENSE_LIMIT)
    }

    pub fn from_fcidump_path(path: impl AsRef<Path>, frozen: &FrozenCoreSpec) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_fcidump_text(label, &text, frozen)
            .map_err(|e| e.context(format!("{}", path.display())))
    }

    /// `E - E_FCI`.
    pub fn delta_e(&self, energy: f64) -> f64 {
        energy - self.fci_energy
    }

    pub fn hartree_fock_energy(&self) -> Result<f64> {
        let s = crate::sim::QuantumState::basis_vector(self.n_qubits, self.reference.bits)?;
        s.expectation(&self.hamiltonian)
    }
}

/// Bundled STO-3G test molecules.
pub mod bundled {
    use super::*;

    pub const H2_0_7414: &str = include_str!("../data/h2_0.7414.fcidump");
    pub const H2_1_0: &str = include_str!("../data/h2_1.0.fcidump");
    pub const H4_1_0: &str = include_str!("../data/h4_1.0.fcidump");
    pub const H4_3_0: &str = include_str!("../data/h4_3.0.fcidump");

    /// `(label, fcidump text)` for every bundled file.
    pub const ALL: [(&str, &str); 4] = [
        ("h2_0.7414", H2_0_7414),
        ("h2_1.0", H2_1_0),
        ("h4_1.0", H4_1_0),
        ("h4_3.0", H4_3_0),
    ];

    pub fn load(label: &str) -> Result<MolecularProblem> {
        let (name, text) = ALL
            .iter()
            .find(|(n, _)| *n == label)
            .ok_or_else(|| Error::InvalidArgument(format!("no bundled molecule {label:?}")))?;
        MolecularProblem::from_fcidump_text(*name, text, &FrozenCoreSpec::none())
    }

    pub fn h2() -> MolecularProblem {
        load("h2_0.7414").expect("bundled H2 file is valid")
    }

    pub fn h4() -> MolecularProblem {
        load("h4_1.0").expect("bundled H4 file is valid")
    }
}
