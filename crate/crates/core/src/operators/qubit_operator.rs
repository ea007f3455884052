use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Terms with smaller coefficient modulus are dropped by [`QubitOperator::simplify`].
pub const COEFF_TOLERANCE: f64 = 1e-12;

/// A complex-weighted sum of Pauli strings on a fixed register.
///
/// Terms are kept in a `BTreeMap`, so iteration order (and therefore every
/// downstream floating-point reduction) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOperator {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl QubitOperator {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: Complex64) -> Self {
        Self::from_term(PauliString::identity(n_qubits), coeff)
    }

    pub fn from_term(pauli: PauliString, coeff: Complex64) -> Self {
        let mut op = Self::zero(pauli.n_qubits());
        op.add_term(pauli, coeff);
        op
    }

    /// Sum of `coeff * pauli` over the given terms (merged, then simplified).
    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Result<Self> {
        let mut op = Self::zero(n_qubits);
        for (p, c) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::Dimension(format!(
                    "{}-qubit term in {n_qubits}-qubit operator",
                    p.n_qubits()
                )));
            }
            op.add_term(p, c);
        }
        op.simplify();
        Ok(op)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, pauli: &PauliString) -> Complex64 {
        self.terms.get(pauli).copied().unwrap_or_default()
    }

    /// Accumulates a term without simplifying.
    pub fn add_term(&mut self, pauli: PauliString, coeff: Complex64) {
        assert_eq!(pauli.n_qubits(), self.n_qubits, "register size mismatch");
        *self.terms.entry(pauli).or_default() += coeff;
    }

    /// Drops terms whose coefficient modulus is below [`COEFF_TOLERANCE`].
    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_TOLERANCE);
    }

    pub fn simplified(mut self) -> Self {
        self.simplify();
        self
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.n_qubits);
        for (p, c) in &self.terms {
            out.terms.insert(*p, c * factor);
        }
        out.simplified()
    }

    /// Adjoint; Pauli strings are self-adjoint, so only coefficients conjugate.
    pub fn dagger(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// Largest `|Im c|` over the terms; zero for a Hermitian operator.
    pub fn hermitian_residue(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Largest `|Re c|` over the terms; zero for an anti-Hermitian operator.
    pub fn anti_hermitian_residue(&self) -> f64 {
        self.terms.values().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residue() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.anti_hermitian_residue() <= tol
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let residue = self.hermitian_residue();
        if residue > 1e-10 {
            return Err(Error::NonHermitian { residue });
        }
        Ok(())
    }

    fn check_same_register(&self, other: &QubitOperator) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit operator combined with {}-qubit operator",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    /// Operator product, returning a dimension error on register mismatch.
    pub fn try_mul(&self, other: &QubitOperator) -> Result<Self> {
        self.check_same_register(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let (phase, p) = pa.multiply_unchecked(pb);
                out.add_term(p, ca * cb * phase);
            }
        }
        Ok(out.simplified())
    }

    pub fn try_add(&self, other: &QubitOperator) -> Result<Self> {
        self.check_same_register(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        Ok(out.simplified())
    }

    /// `[a, b] = ab - ba`. Only anticommuting string pairs contribute, each
    /// with twice the product coefficient.
    pub fn commutator(&self, other: &QubitOperator) -> Result<Self> {
        self.check_same_register(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                if pa.commutes_with(pb) {
                    continue;
                }
                let (phase, p) = pa.multiply_unchecked(pb);
                out.add_term(p, ca * cb * phase * 2.0);
            }
        }
        Ok(out.simplified())
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(&self, other: &QubitOperator) -> Result<Self> {
        self.check_same_register(other)?;
        let mut out = Self::zero(self.n_qubits);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                if !pa.commutes_with(pb) {
                    continue;
                }
                let (phase, p) = pa.multiply_unchecked(pb);
                out.add_term(p, ca * cb * phase * 2.0);
            }
        }
        Ok(out.simplified())
    }

    /// True when every pair of terms commutes.
    pub fn terms_commute(&self) -> bool {
        let strings: Vec<_> = self.terms.keys().collect();
        strings
            .iter()
            .enumerate()
            .all(|(i, a)| strings[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// `1e-12`-tolerant structural equality.
    pub fn approx_eq(&self, other: &QubitOperator, tol: f64) -> bool {
        match self.clone().try_add(&other.scaled(Complex64::new(-1.0, 0.0))) {
            Ok(diff) => diff.terms.values().all(|c| c.norm() <= tol),
            Err(_) => false,
        }
    }

    /// Dense `2^n x 2^n` matrix, basis index bit `q` = qubit `q`.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for k in 0..dim {
                let (phase, row) = p.apply_to_basis(k);
                m[(row, k)] += c * phase;
            }
        }
        m
    }

    /// `out = self |psi>` for a dense state vector.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(psi.len(), 1 << self.n_qubits);
        out.iter_mut().for_each(|v| *v = Complex64::default());
        for (p, c) in &self.terms {
            for (k, amp) in psi.iter().enumerate() {
                let (phase, row) = p.apply_to_basis(k);
                out[row] += c * phase * amp;
            }
        }
    }
}

impl fmt::Display for QubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i) [{p}]", c.re, c.im)?;
        }
        Ok(())
    }
}

impl Add for &QubitOperator {
    type Output = QubitOperator;
    fn add(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_add(rhs).expect("register size mismatch")
    }
}

impl Sub for &QubitOperator {
    type Output = QubitOperator;
    fn sub(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_add(&-rhs).expect("register size mismatch")
    }
}

impl Mul for &QubitOperator {
    type Output = QubitOperator;
    fn mul(self, rhs: &QubitOperator) -> QubitOperator {
        self.try_mul(rhs).expect("register size mismatch")
    }
}

impl Neg for &QubitOperator {
    type Output = QubitOperator;
    fn neg(self) -> QubitOperator {
        self.scaled(Complex64::new(-1.0, 0.0))
    }
}

/// Free-function form of [`QubitOperator::commutator`].
pub fn commutator(a: &QubitOperator, b: &QubitOperator) -> Result<QubitOperator> {
    a.commutator(b)
}
