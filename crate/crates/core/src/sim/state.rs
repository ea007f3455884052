use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gates::GateOp;
use super::kernels;
use crate::error::{Error, Result};
use crate::operators::{Pauli, PauliString, QubitOperator};

/// Default qubit limit for density matrices.
pub const DEFAULT_DENSITY_LIMIT: usize = 12;
/// Density matrices beyond this size are always refused.
pub const HARD_DENSITY_LIMIT: usize = 14;

/// Trace drift beyond this raises a numeric-integrity error.
pub const TRACE_DRIFT_TOLERANCE: f64 = 1e-8;
/// Imaginary residue of an expectation value tolerated before rejection.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    Vector,
    Density,
}

impl Backend {
    fn name(self) -> &'static str {
        match self {
            Backend::Vector => "vector",
            Backend::Density => "density",
        }
    }
}

/// A register in one of two representations: a pure state vector, or a
/// density matrix stored as a `2n`-qubit superket (see [`super::kernels`]).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    backend: Backend,
    data: Vec<Complex64>,
}

impl QuantumState {
    /// Computational basis state `|index>` as a state vector.
    pub fn basis_vector(n_qubits: usize, index: usize) -> Result<Self> {
        check_index(n_qubits, index)?;
        let mut data = vec![Complex64::default(); 1 << n_qubits];
        data[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            backend: Backend::Vector,
            data,
        })
    }

    /// `|index><index|` as a density matrix, subject to `limit`.
    pub fn basis_density(n_qubits: usize, index: usize, limit: usize) -> Result<Self> {
        check_index(n_qubits, index)?;
        check_density_size(n_qubits, limit)?;
        let dim = 1usize << n_qubits;
        let mut data = vec![Complex64::default(); dim * dim];
        data[index * dim + index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            backend: Backend::Density,
            data,
        })
    }

    /// Wraps amplitudes; the vector must be normalized to 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = log2_exact(amplitudes.len())?;
        let s = Self {
            n_qubits,
            backend: Backend::Vector,
            data: amplitudes,
        };
        s.validate(1e-10)?;
        Ok(s)
    }

    /// Wraps a dense density matrix after checking trace, Hermiticity and positivity.
    pub fn from_density_matrix(rho: &DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::Dimension("density matrix is not square".into()));
        }
        let n_qubits = log2_exact(rho.nrows())?;
        check_density_size(n_qubits, HARD_DENSITY_LIMIT)?;
        let dim = rho.nrows();
        let mut data = vec![Complex64::default(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = rho[(r, c)];
            }
        }
        let s = Self {
            n_qubits,
            backend: Backend::Density,
            data,
        };
        s.validate(1e-10)?;
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match self.backend {
            Backend::Vector => Some(&self.data),
            Backend::Density => None,
        }
    }

    /// `rho[row, col]`; for a vector state the entry of `|psi><psi|`.
    pub fn density_entry(&self, row: usize, col: usize) -> Complex64 {
        match self.backend {
            Backend::Vector => self.data[row] * self.data[col].conj(),
            Backend::Density => self.data[row * self.dim() + col],
        }
    }

    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |r, c| self.density_entry(r, c))
    }

    /// Converts to the density backend (no-op if already there).
    pub fn into_density(self, limit: usize) -> Result<Self> {
        match self.backend {
            Backend::Density => Ok(self),
            Backend::Vector => {
                check_density_size(self.n_qubits, limit)?;
                let dim = self.dim();
                let mut data = vec![Complex64::default(); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        data[r * dim + c] = self.data[r] * self.data[c].conj();
                    }
                }
                Ok(Self {
                    n_qubits: self.n_qubits,
                    backend: Backend::Density,
                    data,
                })
            }
        }
    }

    /// Norm squared (vector) or trace (density).
    pub fn trace(&self) -> f64 {
        match self.backend {
            Backend::Vector => self.data.iter().map(|a| a.norm_sqr()).sum(),
            Backend::Density => {
                let dim = self.dim();
                (0..dim).map(|k| self.data[k * dim + k].re).sum()
            }
        }
    }

    /// Fails if the trace has drifted; never renormalizes.
    pub fn check_trace(&self) -> Result<()> {
        let t = self.trace();
        if (t - 1.0).abs() > TRACE_DRIFT_TOLERANCE || !t.is_finite() {
            return Err(Error::NumericIntegrity(format!(
                "{} state trace drifted to {t:.15}",
                self.backend.name()
            )));
        }
        Ok(())
    }

    /// Full invariant check: unit trace, plus Hermiticity and positivity
    /// (min eigenvalue >= -1e-9) on the density backend.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let t = self.trace();
        if (t - 1.0).abs() > tol {
            return Err(Error::NumericIntegrity(format!("trace {t} differs from 1")));
        }
        if self.backend == Backend::Density {
            let dim = self.dim();
            for r in 0..dim {
                for c in 0..r {
                    let d = self.data[r * dim + c] - self.data[c * dim + r].conj();
                    if d.norm() > tol {
                        return Err(Error::NumericIntegrity("density matrix not Hermitian".into()));
                    }
                }
            }
            let min = min_eigenvalue(&self.density_matrix());
            if min < -1e-9 {
                return Err(Error::NumericIntegrity(format!(
                    "density matrix has eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    fn require_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Dimension(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// `|psi> <- G|psi>` or `rho <- G rho G+`.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let n = self.n_qubits;
        match *gate {
            GateOp::Cnot { control, target } => {
                kernels::apply_cnot(&mut self.data, control, target);
                if self.backend == Backend::Density {
                    kernels::apply_cnot(&mut self.data, control + n, target + n);
                }
            }
            GateOp::Rotation {
                axis: super::gates::Axis::Z,
                angle,
                qubit,
            } => {
                let d0 = Complex64::from_polar(1.0, -angle / 2.0);
                let d1 = Complex64::from_polar(1.0, angle / 2.0);
                match self.backend {
                    Backend::Vector => kernels::apply_diagonal(&mut self.data, qubit, d0, d1),
                    Backend::Density => {
                        kernels::apply_diagonal(&mut self.data, qubit + n, d0, d1);
                        kernels::apply_diagonal(&mut self.data, qubit, d0.conj(), d1.conj());
                    }
                }
            }
            _ => {
                let (q, u) = gate
                    .single_qubit_matrix()
                    .expect("non-CNOT gates are single-qubit");
                match self.backend {
                    Backend::Vector => kernels::apply_single(&mut self.data, q, &u),
                    Backend::Density => {
                        kernels::apply_single(&mut self.data, q + n, &u);
                        kernels::apply_single(&mut self.data, q, &kernels::conj2(&u));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies a Pauli operator as a unitary (the perturbation of a noisy location).
    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli) -> Result<()> {
        self.require_qubit(qubit)?;
        let s = PauliString::single(self.n_qubits, qubit, pauli)?;
        self.apply_pauli_string(&s)
    }

    pub fn apply_pauli_string(&mut self, p: &PauliString) -> Result<()> {
        self.check_register(p.n_qubits())?;
        let n = self.n_qubits;
        kernels::apply_pauli(&mut self.data, p.x_mask(), p.z_mask(), p.y_count());
        if self.backend == Backend::Density {
            // sigma rho sigma: right multiplication by a Hermitian Pauli is
            // conj(P) on the column register, and conj(P) = (-1)^{#Y} P.
            kernels::apply_pauli(&mut self.data, p.x_mask() << n, p.z_mask() << n, p.y_count());
            if p.y_count() % 2 == 1 {
                self.data.iter_mut().for_each(|a| *a = -*a);
            }
        }
        Ok(())
    }

    /// `exp(i phi P)` applied exactly.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, phi: f64) -> Result<()> {
        self.check_register(p.n_qubits())?;
        let n = self.n_qubits;
        let (x, z, ny) = (p.x_mask(), p.z_mask(), p.y_count());
        match self.backend {
            Backend::Vector => kernels::apply_pauli_rotation(&mut self.data, x, z, ny, phi),
            Backend::Density => {
                kernels::apply_pauli_rotation(&mut self.data, x << n, z << n, ny, phi);
                let conj_phi = if ny % 2 == 0 { -phi } else { phi };
                kernels::apply_pauli_rotation(&mut self.data, x, z, ny, conj_phi);
            }
        }
        Ok(())
    }

    /// `rho <- (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)` on `qubit`.
    pub fn apply_depolarizing(&mut self, qubit: usize, p: f64) -> Result<()> {
        if self.backend != Backend::Density {
            return Err(Error::UnsupportedBackend("vector"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        self.require_qubit(qubit)?;
        if p > 0.0 {
            kernels::apply_depolarizing(&mut self.data, self.n_qubits, qubit, p);
        }
        Ok(())
    }

    fn check_register(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{n}-qubit operator on a {}-qubit state",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// `Tr[H rho]` or `<psi|H|psi>`; the imaginary residue must be below 1e-10.
    pub fn expectation(&self, h: &QubitOperator) -> Result<f64> {
        self.check_register(h.n_qubits())?;
        let dim = self.dim();
        let mut total = Complex64::default();
        for (p, c) in h.terms() {
            let x = p.x_mask() as usize;
            let mut acc = Complex64::default();
            match self.backend {
                Backend::Vector => {
                    for k in 0..dim {
                        let (phase, k2) = p.apply_to_basis(k);
                        acc += self.data[k2].conj() * phase * self.data[k];
                    }
                }
                Backend::Density => {
                    for k in 0..dim {
                        let (phase, _) = p.apply_to_basis(k);
                        acc += phase * self.data[k * dim + (k ^ x)];
                    }
                }
            }
            total += c * acc;
        }
        if total.im.abs() > IMAGINARY_TOLERANCE * (1.0 + total.re.abs()) {
            return Err(Error::NumericIntegrity(format!(
                "expectation value has imaginary part {:.3e}",
                total.im
            )));
        }
        Ok(total.re)
    }

    /// `|<a|b>|^2` for vectors, `<psi|rho|psi>` when one side is a vector, and
    /// `Tr[rho sigma]` for two density matrices.
    pub fn overlap(&self, other: &QuantumState) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension("states on different registers".into()));
        }
        let dim = self.dim();
        let v = match (self.backend, other.backend) {
            (Backend::Vector, Backend::Vector) => self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm_sqr(),
            _ => {
                let mut acc = Complex64::default();
                for r in 0..dim {
                    for c in 0..dim {
                        acc += self.density_entry(r, c) * other.density_entry(c, r);
                    }
                }
                acc.re
            }
        };
        Ok(v)
    }
}

/// Free-function form of [`QuantumState::expectation`].
pub fn expectation(h: &QubitOperator, state: &QuantumState) -> Result<f64> {
    state.expectation(h)
}

fn check_index(n_qubits: usize, index: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > 30 {
        return Err(Error::InvalidArgument(format!("unsupported register size {n_qubits}")));
    }
    if index >= 1 << n_qubits {
        return Err(Error::Dimension(format!(
            "basis index {index} out of range for {n_qubits} qubits"
        )));
    }
    Ok(())
}

fn check_density_size(n_qubits: usize, limit: usize) -> Result<()> {
    let limit = limit.min(HARD_DENSITY_LIMIT);
    if n_qubits > limit {
        return Err(Error::TooLarge {
            what: "density matrix",
            n_qubits,
            limit,
        });
    }
    Ok(())
}

fn log2_exact(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::Dimension(format!("length {len} is not a power of two >= 2")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Smallest eigenvalue of a Hermitian matrix via its real embedding.
pub(crate) fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let dim = m.nrows();
    let embed = DMatrix::from_fn(2 * dim, 2 * dim, |i, j| {
        let (bi, ri) = (i / dim, i % dim);
        let (bj, rj) = (j / dim, j % dim);
        let h = 0.5 * (m[(ri, rj)] + m[(rj, ri)].conj());
        match (bi, bj) {
            (0, 0) | (1, 1) => h.re,
            (0, 1) => -h.im,
            _ => h.im,
        }
    });
    nalgebra::SymmetricEigen::new(embed)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gates::{Axis, GateOp};

    fn z(n: usize, q: usize) -> QubitOperator {
        QubitOperator::from_term(
            PauliString::single(n, q, Pauli::Z).unwrap(),
            Complex64::new(1.0, 0.0),
        )
    }

    #[test]
    fn cnot_on_lsb_control() {
        // |10> in (q1 q0) notation with q0 = 1: index 1.
        let mut s = QuantumState::basis_vector(2, 0b01).unwrap();
        s.apply_gate(&GateOp::Cnot { control: 0, target: 1 }).unwrap();
        assert!((s.amplitudes().unwrap()[0b11].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rz_on_zero_keeps_z() {
        let mut s = QuantumState::basis_vector(1, 0).unwrap();
        s.apply_gate(&GateOp::Rotation { axis: Axis::Z, angle: 0.7, qubit: 0 }).unwrap();
        assert!((s.expectation(&z(1, 0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((s.overlap(&QuantumState::basis_vector(1, 0).unwrap()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gate_index_out_of_range() {
        let mut s = QuantumState::basis_vector(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::Hadamard(2)),
            Err(Error::Dimension(_))
        ));
        assert!(s.apply_gate(&GateOp::Cnot { control: 1, target: 1 }).is_err());
    }

    #[test]
    fn depolarizing_basic_cases() {
        let mut s = QuantumState::basis_density(1, 0, 12).unwrap();
        s.apply_depolarizing(0, 0.0).unwrap();
        assert_eq!(s, QuantumState::basis_density(1, 0, 12).unwrap());
        let p = 0.3;
        s.apply_depolarizing(0, p).unwrap();
        assert!((s.density_entry(0, 0).re - (1.0 - 2.0 * p / 3.0)).abs() < 1e-15);
        assert!((s.density_entry(1, 1).re - 2.0 * p / 3.0).abs() < 1e-15);

        let mixed = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        let mut m = QuantumState::from_density_matrix(&mixed).unwrap();
        m.apply_depolarizing(0, 0.77).unwrap();
        assert!((m.density_matrix() - mixed).norm() < 1e-15);
    }

    #[test]
    fn depolarizing_errors() {
        let mut v = QuantumState::basis_vector(1, 0).unwrap();
        assert!(matches!(v.apply_depolarizing(0, 0.1), Err(Error::UnsupportedBackend(_))));
        let mut d = QuantumState::basis_density(1, 0, 12).unwrap();
        assert!(matches!(d.apply_depolarizing(0, 1.2), Err(Error::InvalidProbability(_))));
        assert!(matches!(d.apply_depolarizing(0, -0.1), Err(Error::InvalidProbability(_))));
    }

    #[test]
    fn maximally_mixed_z_expectation_vanishes() {
        let mixed = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        let s = QuantumState::from_density_matrix(&mixed).unwrap();
        assert!(s.expectation(&z(1, 0)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn density_limit_enforced() {
        assert!(matches!(
            QuantumState::basis_density(5, 0, 4),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn pauli_rotation_matches_dense_on_density() {
        let p = PauliString::parse(2, "Y0 X1").unwrap();
        let phi = 0.41;
        let mut v = QuantumState::basis_vector(2, 0b10).unwrap();
        v.apply_gate(&GateOp::Hadamard(0)).unwrap();
        let mut d = v.clone().into_density(12).unwrap();
        v.apply_pauli_rotation(&p, phi).unwrap();
        d.apply_pauli_rotation(&p, phi).unwrap();
        assert!((v.density_matrix() - d.density_matrix()).norm() < 1e-14);
        let mut v2 = v.clone();
        let mut d2 = d.clone();
        v2.apply_pauli_string(&p).unwrap();
        d2.apply_pauli_string(&p).unwrap();
        assert!((v2.density_matrix() - d2.density_matrix()).norm() < 1e-14);
    }
}
