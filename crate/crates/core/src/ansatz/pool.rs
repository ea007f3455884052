//! Operator pools for ADAPT growth.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::element::AnsatzElement;
use crate::error::{Error, Result};
use crate::operators::{
    jordan_wigner, qubit_excitation_map, FermionOperator, Ladder, Pauli, PauliString,
    QubitOperator,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolKind {
    Fermionic,
    Qeb,
    #[serde(alias = "qubit")]
    QubitPauli,
}

impl PoolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PoolKind::Fermionic => "fermionic",
            PoolKind::Qeb => "qeb",
            PoolKind::QubitPauli => "qubit_pauli",
        }
    }
}

impl std::str::FromStr for PoolKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fermionic" => Ok(Self::Fermionic),
            "qeb" => Ok(Self::Qeb),
            "qubit_pauli" | "qubit" => Ok(Self::QubitPauli),
            other => Err(Error::InvalidArgument(format!("unknown pool kind {other:?}"))),
        }
    }
}

/// A single excitation `occupied -> virtual`, or a double
/// `(k, l) -> (i, j)` with `k < l`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Excitation {
    Single { from: usize, to: usize },
    Double { from: (usize, usize), to: (usize, usize) },
}

impl Excitation {
    /// Anti-Hermitian excitation minus de-excitation, as a fermionic operator.
    pub fn generator(&self) -> FermionOperator {
        let one = Complex64::new(1.0, 0.0);
        let up = match *self {
            Excitation::Single { from, to } => {
                FermionOperator::term(one, vec![Ladder::create(to), Ladder::annihilate(from)])
            }
            Excitation::Double {
                from: (k, l),
                to: (i, j),
            } => FermionOperator::term(
                one,
                vec![
                    Ladder::create(i),
                    Ladder::create(j),
                    Ladder::annihilate(k),
                    Ladder::annihilate(l),
                ],
            ),
        };
        up.plus(&up.dagger().scaled(-one))
    }

    fn label(&self) -> String {
        match *self {
            Excitation::Single { from, to } => format!("s({from}->{to})"),
            Excitation::Double { from, to } => {
                format!("d({},{}->{},{})", from.0, from.1, to.0, to.1)
            }
        }
    }
}

/// Spin-conserving singles and doubles from the lowest `n_electrons`
/// spin-orbitals into the rest; singles first, each group lexicographic.
pub fn reference_excitations(n_spin_orbitals: usize, n_electrons: usize) -> Result<Vec<Excitation>> {
    check_counts(n_spin_orbitals, n_electrons)?;
    let occ: Vec<usize> = (0..n_electrons).collect();
    let virt: Vec<usize> = (n_electrons..n_spin_orbitals).collect();
    let mut out = Vec::new();
    for &k in &occ {
        for &i in &virt {
            if k % 2 == i % 2 {
                out.push(Excitation::Single { from: k, to: i });
            }
        }
    }
    for (a, &k) in occ.iter().enumerate() {
        for &l in &occ[a + 1..] {
            for (b, &i) in virt.iter().enumerate() {
                for &j in &virt[b + 1..] {
                    if k % 2 + l % 2 == i % 2 + j % 2 {
                        out.push(Excitation::Double {
                            from: (k, l),
                            to: (i, j),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_counts(n_spin_orbitals: usize, n_electrons: usize) -> Result<()> {
    if n_electrons == 0 || n_electrons >= n_spin_orbitals {
        return Err(Error::InvalidArgument(format!(
            "need 0 < electrons < spin-orbitals, got {n_electrons} and {n_spin_orbitals}"
        )));
    }
    Ok(())
}

/// Maps an excitation to a qubit generator, with (`fermionic`) or without
/// (`qeb`) parity strings.
pub fn excitation_element(ex: &Excitation, n_qubits: usize, kind: PoolKind) -> Result<AnsatzElement> {
    let f = ex.generator();
    let g = match kind {
        PoolKind::Fermionic => jordan_wigner(&f, n_qubits)?,
        PoolKind::Qeb => qubit_excitation_map(&f, n_qubits)?,
        PoolKind::QubitPauli => {
            return Err(Error::InvalidArgument(
                "the qubit pool has no excitation elements".into(),
            ))
        }
    };
    AnsatzElement::new(g, format!("{}:{}", kind.as_str(), ex.label()))
}

/// Finite set of candidate elements.
#[derive(Debug, Clone)]
pub struct Pool {
    kind: PoolKind,
    n_qubits: usize,
    n_electrons: usize,
    elements: Vec<AnsatzElement>,
}

impl Pool {
    pub fn build(kind: PoolKind, n_qubits: usize, n_electrons: usize) -> Result<Self> {
        match kind {
            PoolKind::Fermionic => build_fermionic_pool(n_qubits, n_electrons),
            PoolKind::Qeb => build_qeb_pool(n_qubits, n_electrons),
            PoolKind::QubitPauli => {
                let mut pool = build_qubit_pool(n_qubits)?;
                pool.n_electrons = n_electrons;
                Ok(pool)
            }
        }
    }

    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[AnsatzElement] {
        &self.elements
    }

    pub fn get(&self, index: usize) -> Option<&AnsatzElement> {
        self.elements.get(index)
    }
}

fn excitation_pool(kind: PoolKind, n: usize, n_e: usize) -> Result<Pool> {
    let elements = reference_excitations(n, n_e)?
        .iter()
        .map(|ex| excitation_element(ex, n, kind))
        .collect::<Result<Vec<_>>>()?;
    Ok(Pool {
        kind,
        n_qubits: n,
        n_electrons: n_e,
        elements,
    })
}

/// `a+_i a_k - a+_k a_i` and `a+_i a+_j a_k a_l - h.c.` under Jordan-Wigner.
pub fn build_fermionic_pool(n_spin_orbitals: usize, n_electrons: usize) -> Result<Pool> {
    excitation_pool(PoolKind::Fermionic, n_spin_orbitals, n_electrons)
}

/// Qubit-excitation analogue of the fermionic pool (no parity strings).
pub fn build_qeb_pool(n_spin_orbitals: usize, n_electrons: usize) -> Result<Pool> {
    excitation_pool(PoolKind::Qeb, n_spin_orbitals, n_electrons)
}

/// `i P` for every X/Y string on 2 or 4 qubits with an odd number of Ys.
pub fn build_qubit_pool(n_qubits: usize) -> Result<Pool> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(format!(
            "the qubit pool needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let mut supports: Vec<Vec<usize>> = Vec::new();
    for a in 0..n_qubits {
        for b in a + 1..n_qubits {
            supports.push(vec![a, b]);
        }
    }
    for a in 0..n_qubits {
        for b in a + 1..n_qubits {
            for c in b + 1..n_qubits {
                for d in c + 1..n_qubits {
                    supports.push(vec![a, b, c, d]);
                }
            }
        }
    }
    let mut elements = Vec::new();
    for support in &supports {
        let w = support.len();
        // bit t of `pattern` set = Y on support[t]; ascending pattern order
        for pattern in 0u32..1 << w {
            if pattern.count_ones() % 2 == 0 {
                continue;
            }
            let factors: Vec<(usize, Pauli)> = support
                .iter()
                .enumerate()
                .map(|(t, &q)| {
                    let p = if pattern >> (w - 1 - t) & 1 == 1 {
                        Pauli::Y
                    } else {
                        Pauli::X
                    };
                    (q, p)
                })
                .collect();
            let p = PauliString::new(n_qubits, &factors)?;
            let label = format!("qubit_pauli:{p}");
            let g = QubitOperator::from_term(p, Complex64::new(0.0, 1.0));
            elements.push(AnsatzElement::new(g, label)?);
        }
    }
    Ok(Pool {
        kind: PoolKind::QubitPauli,
        n_qubits,
        n_electrons: 0,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermionic_pool_h2_size() {
        let pool = build_fermionic_pool(4, 2).unwrap();
        assert_eq!(pool.len(), 3);
        assert_eq!(pool.elements()[0].label(), "fermionic:s(0->2)");
        assert_eq!(pool.elements()[2].label(), "fermionic:d(0,1->2,3)");
    }

    #[test]
    fn qubit_pool_sizes() {
        assert_eq!(build_qubit_pool(4).unwrap().len(), 20);
        assert_eq!(build_qubit_pool(8).unwrap().len(), 616);
        assert!(build_qubit_pool(1).is_err());
    }

    #[test]
    fn qeb_single_matches_closed_form() {
        let ex = Excitation::Single { from: 1, to: 0 };
        let e = excitation_element(&ex, 2, PoolKind::Qeb).unwrap();
        // Q+_0 Q_1 - Q+_1 Q_0 = (i/2)(X0 Y1 - Y0 X1)
        let want = QubitOperator::from_terms(
            2,
            [
                (PauliString::parse(2, "X0 Y1").unwrap(), Complex64::new(0.0, 0.5)),
                (PauliString::parse(2, "Y0 X1").unwrap(), Complex64::new(0.0, -0.5)),
            ],
        )
        .unwrap();
        assert!(e.generator().approx_eq(&want, 1e-14));
    }

    #[test]
    fn qeb_doubles_have_weight_four() {
        let pool = build_qeb_pool(8, 4).unwrap();
        for e in pool.elements().iter().filter(|e| e.label().contains(":d(")) {
            assert!(e.rotations().iter().all(|r| r.pauli.weight() == 4));
        }
    }

    #[test]
    fn invalid_counts_rejected() {
        assert!(build_fermionic_pool(4, 0).is_err());
        assert!(build_qeb_pool(4, 4).is_err());
    }
}
