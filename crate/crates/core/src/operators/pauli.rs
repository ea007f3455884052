//! Pauli strings in symplectic (x, z) bitmask form.
//!
//! Qubit `j` carries `X` when only bit `j` of `x` is set, `Z` when only bit
//! `j` of `z` is set and `Y` when both are. Qubit 0 is the least significant
//! bit of a computational basis index.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a bitmask Pauli string can address.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Dense 2x2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A tensor product of single-qubit Paulis on `n_qubits` qubits, identity
/// everywhere not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n_qubits),
            "register size {n_qubits} outside 1..={MAX_QUBITS}"
        );
        Self { n_qubits, x: 0, z: 0 }
    }

    /// Builds a string from `(qubit, pauli)` pairs. Repeated qubits are an error.
    pub fn new(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "register size {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        let mut s = Self::identity(n_qubits);
        for &(q, p) in factors {
            if q >= n_qubits {
                return Err(Error::Dimension(format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            let bit = 1u64 << q;
            if (s.x | s.z) & bit != 0 {
                return Err(Error::InvalidArgument(format!("qubit {q} listed twice")));
            }
            let (xb, zb) = p.bits();
            if xb {
                s.x |= bit;
            }
            if zb {
                s.z |= bit;
            }
        }
        Ok(s)
    }

    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli) -> Result<Self> {
        Self::new(n_qubits, &[(qubit, pauli)])
    }

    /// Parses compact notation such as `"X0 Y1 Z3"`; `"I"` is the identity.
    pub fn parse(n_qubits: usize, text: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let (head, idx) = tok.split_at(1);
            let p = match head {
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                "Z" => Pauli::Z,
                _ => return Err(Error::InvalidArgument(format!("bad Pauli token {tok:?}"))),
            };
            let q: usize = idx
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad qubit index in {tok:?}")))?;
            factors.push((q, p));
        }
        Self::new(n_qubits, &factors)
    }

    #[cfg(test)]
    pub(crate) fn from_masks(n_qubits: usize, x: u64, z: u64) -> Self {
        Self { n_qubits, x, z }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn is_identity(&self) -> bool {
        self.support_mask() == 0
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        let bit = 1u64 << qubit;
        match (self.x & bit != 0, self.z & bit != 0) {
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
            (false, false) => None,
        }
    }

    /// Stored `(qubit, pauli)` factors in ascending qubit order.
    pub fn factors(&self) -> Vec<(usize, Pauli)> {
        (0..self.n_qubits)
            .filter_map(|q| self.get(q).map(|p| (q, p)))
            .collect()
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|&q| self.support_mask() >> q & 1 == 1)
            .collect()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        s % 2 == 0
    }

    /// Product `self * other` as `(phase, string)` with phase in {±1, ±i}.
    pub fn multiply(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "Pauli product of {}-qubit and {}-qubit strings",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self.multiply_unchecked(other))
    }

    // sigma(x, z) = i^{xz} X^x Z^z, so the product phase exponent collects the
    // Y-phases of both factors, removes the one of the result, and adds a sign
    // from moving Z^{z1} past X^{x2}.
    pub(crate) fn multiply_unchecked(&self, other: &PauliString) -> (Complex64, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() + (other.x & other.z).count_ones() + 4
            - (x & z).count_ones() % 4
            + 2 * (self.z & other.x).count_ones();
        (
            i_pow(e),
            PauliString {
                n_qubits: self.n_qubits,
                x,
                z,
            },
        )
    }

    /// Action on a basis state: `P|k> = phase |k ^ x>`.
    #[inline]
    pub fn apply_to_basis(&self, k: usize) -> (Complex64, usize) {
        let sign = ((k as u64 & self.z).count_ones() % 2) * 2;
        (i_pow(self.y_count() + sign), k ^ self.x as usize)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.factors() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{p}{q}")?;
            first = false;
        }
        Ok(())
    }
}

/// Free-function form of [`PauliString::multiply`].
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> Result<(Complex64, PauliString)> {
    a.multiply(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat_mul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn single_matrix(s: &PauliString) -> [[Complex64; 2]; 2] {
        match s.get(0) {
            Some(p) => p.matrix(),
            None => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        }
    }

    #[test]
    fn involution() {
        let x0 = PauliString::parse(1, "X0").unwrap();
        let (ph, p) = pauli_multiply(&x0, &x0).unwrap();
        assert_eq!(ph, c(1.0, 0.0));
        assert!(p.is_identity());
    }

    #[test]
    fn x_times_y_is_iz() {
        let x0 = PauliString::parse(1, "X0").unwrap();
        let y0 = PauliString::parse(1, "Y0").unwrap();
        let (ph, p) = x0.multiply(&y0).unwrap();
        assert_eq!(ph, c(0.0, 1.0));
        assert_eq!(p, PauliString::parse(1, "Z0").unwrap());
    }

    #[test]
    fn two_qubit_product() {
        let a = PauliString::parse(2, "X0 Y1").unwrap();
        let b = PauliString::parse(2, "Z1").unwrap();
        let (ph, p) = a.multiply(&b).unwrap();
        assert_eq!(ph, c(0.0, 1.0));
        assert_eq!(p, PauliString::parse(2, "X0 X1").unwrap());
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let a = PauliString::parse(2, "X0").unwrap();
        let b = PauliString::parse(3, "X0").unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn out_of_range_qubit_rejected() {
        assert!(PauliString::parse(2, "X2").is_err());
        assert!(PauliString::parse(2, "X0 Z0").is_err());
    }

    #[test]
    fn single_qubit_table_matches_matrices() {
        let all = ["I", "X0", "Y0", "Z0"].map(|t| PauliString::parse(1, t).unwrap());
        for a in &all {
            for b in &all {
                let (ph, p) = a.multiply(b).unwrap();
                let expect = mat_mul(single_matrix(a), single_matrix(b));
                let got = single_matrix(&p);
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((ph * got[i][j] - expect[i][j]).norm() < 1e-15, "{a} * {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_action_matches_matrix() {
        for p in Pauli::ALL {
            let s = PauliString::single(1, 0, p).unwrap();
            let m = p.matrix();
            for k in 0..2 {
                let (ph, k2) = s.apply_to_basis(k);
                assert!((ph - m[k2][k]).norm() < 1e-15);
            }
        }
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        (0u64..(1 << n), 0u64..(1 << n)).prop_map(move |(x, z)| PauliString::from_masks(n, x, z))
    }

    proptest! {
        #[test]
        fn associative_and_phase_consistent(a in arb_string(5), b in arb_string(5), c3 in arb_string(5)) {
            let (p1, ab) = a.multiply(&b).unwrap();
            let (p2, ab_c) = ab.multiply(&c3).unwrap();
            let (q1, bc) = b.multiply(&c3).unwrap();
            let (q2, a_bc) = a.multiply(&bc).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!((p1 * p2 - q1 * q2).norm() < 1e-15);
        }

        #[test]
        fn commutation_flag_matches_product_phases(a in arb_string(4), b in arb_string(4)) {
            let (p1, s1) = a.multiply(&b).unwrap();
            let (p2, s2) = b.multiply(&a).unwrap();
            prop_assert_eq!(s1, s2);
            let commute = (p1 - p2).norm() < 1e-15;
            prop_assert_eq!(commute, a.commutes_with(&b));
        }
    }
}
