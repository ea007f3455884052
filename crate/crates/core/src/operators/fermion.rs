//! Second-quantized operators and the Jordan-Wigner map.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::pauli::{Pauli, PauliString};
use super::qubit_operator::{QubitOperator, COEFF_TOLERANCE};
use crate::error::{Error, Result};

/// A single creation (`dagger = true`) or annihilation operator on a spin-orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

/// Sum of coefficient-weighted products of ladder operators. Products are
/// applied right to left, as written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(coeff: Complex64, product: Vec<Ladder>) -> Self {
        Self {
            terms: vec![(coeff, product)],
        }
    }

    pub fn push(&mut self, coeff: Complex64, product: Vec<Ladder>) {
        self.terms.push((coeff, product));
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|(_, p)| p.iter().map(|l| l.mode))
            .max()
    }

    pub fn plus(&self, other: &FermionOperator) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, p)| (c * factor, p.clone()))
                .collect(),
        }
    }

    pub fn product(&self, other: &FermionOperator) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, pa) in &self.terms {
            for (cb, pb) in &other.terms {
                let mut p = pa.clone();
                p.extend_from_slice(pb);
                terms.push((ca * cb, p));
            }
        }
        Self { terms }
    }

    pub fn dagger(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, p)| {
                    let rev = p
                        .iter()
                        .rev()
                        .map(|l| Ladder {
                            mode: l.mode,
                            dagger: !l.dagger,
                        })
                        .collect();
                    (c.conj(), rev)
                })
                .collect(),
        }
    }

    /// Canonical normal-ordered form: creators left of annihilators, each
    /// group in descending mode order, equal products merged and near-zero
    /// coefficients dropped.
    pub fn normal_ordered(&self) -> BTreeMap<Vec<Ladder>, Complex64> {
        let mut out: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        let mut stack: Vec<(Complex64, Vec<Ladder>)> = self.terms.clone();
        'outer: while let Some((coeff, mut prod)) = stack.pop() {
            // One adjacent transposition per visit; a contraction spawns a new term.
            for j in 1..prod.len() {
                let (left, right) = (prod[j - 1], prod[j]);
                if left == right {
                    // a a = 0 and a+ a+ = 0
                    continue 'outer;
                }
                if should_swap(left, right) {
                    if left.mode == right.mode {
                        // a_i a_i+ = 1 - a_i+ a_i
                        let mut contracted = prod.clone();
                        contracted.drain(j - 1..=j);
                        stack.push((coeff, contracted));
                    }
                    prod.swap(j - 1, j);
                    stack.push((-coeff, prod));
                    continue 'outer;
                }
            }
            *out.entry(prod).or_default() += coeff;
        }
        out.retain(|_, c| c.norm() >= COEFF_TOLERANCE);
        out
    }

    /// Hermiticity by comparison of normal-ordered forms of `F` and `F†`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let a = self.normal_ordered();
        let b = self.dagger().normal_ordered();
        let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
        let hermitian = keys.into_iter().all(|k| {
            let ca = a.get(k).copied().unwrap_or_default();
            let cb = b.get(k).copied().unwrap_or_default();
            (ca - cb).norm() <= tol
        });
        hermitian
    }
}

// Creators sort before annihilators; within a group higher modes come first.
fn should_swap(left: Ladder, right: Ladder) -> bool {
    match (left.dagger, right.dagger) {
        (false, true) => true,
        (true, false) => false,
        _ => left.mode < right.mode,
    }
}

fn ladder_image(l: Ladder, n: usize, z_chain: bool) -> Result<QubitOperator> {
    if l.mode >= n {
        return Err(Error::Dimension(format!(
            "spin-orbital {} out of range for {n} spin-orbitals",
            l.mode
        )));
    }
    let chain: Vec<(usize, Pauli)> = if z_chain {
        (0..l.mode).map(|r| (r, Pauli::Z)).collect()
    } else {
        Vec::new()
    };
    let with = |p: Pauli| {
        let mut f = chain.clone();
        f.push((l.mode, p));
        PauliString::new(n, &f)
    };
    let y_sign = if l.dagger { -0.5 } else { 0.5 };
    QubitOperator::from_terms(
        n,
        [
            (with(Pauli::X)?, Complex64::new(0.5, 0.0)),
            (with(Pauli::Y)?, Complex64::new(0.0, y_sign)),
        ],
    )
}

/// Jordan-Wigner image: `a_i+ -> (X_i - iY_i)/2 Z_0..Z_{i-1}` and
/// `a_i -> (X_i + iY_i)/2 Z_0..Z_{i-1}`, qubit `i` for spin-orbital `i`.
pub fn jordan_wigner(op: &FermionOperator, n_spin_orbitals: usize) -> Result<QubitOperator> {
    map_ladders(op, n_spin_orbitals, true)
}

/// Same products with qubit ladders `Q+ = (X - iY)/2`, `Q = (X + iY)/2`,
/// i.e. without parity strings.
pub fn qubit_excitation_map(op: &FermionOperator, n_qubits: usize) -> Result<QubitOperator> {
    map_ladders(op, n_qubits, false)
}

fn map_ladders(op: &FermionOperator, n: usize, z_chain: bool) -> Result<QubitOperator> {
    let mut images: BTreeMap<Ladder, QubitOperator> = BTreeMap::new();
    let mut out = QubitOperator::zero(n);
    for (coeff, product) in &op.terms {
        let mut acc = QubitOperator::identity(n, *coeff);
        for l in product {
            if !images.contains_key(l) {
                images.insert(*l, ladder_image(*l, n, z_chain)?);
            }
            acc = acc.try_mul(&images[l])?;
            if acc.is_empty() {
                break;
            }
        }
        for (p, c) in acc.terms() {
            out.add_term(*p, *c);
        }
    }
    Ok(out.simplified())
}

/// Total number operator `sum_i a_i+ a_i`.
pub fn number_operator(n_spin_orbitals: usize) -> FermionOperator {
    let mut f = FermionOperator::new();
    for i in 0..n_spin_orbitals {
        f.push(
            Complex64::new(1.0, 0.0),
            vec![Ladder::create(i), Ladder::annihilate(i)],
        );
    }
    f
}
