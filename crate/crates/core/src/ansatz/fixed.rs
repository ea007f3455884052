//! Fixed ansätze: UCCSD and k-UpCCGSD.

use super::element::Ansatz;
use super::pool::{excitation_element, reference_excitations, Excitation, PoolKind};
use crate::error::{Error, Result};

/// One element per reference single and double, singles first; a single
/// Trotter step.
pub fn build_uccsd(n_spin_orbitals: usize, n_electrons: usize, kind: PoolKind) -> Result<Ansatz> {
    if kind == PoolKind::QubitPauli {
        return Err(Error::InvalidArgument(
            "UCCSD is defined for fermionic or qeb excitations".into(),
        ));
    }
    let elements = reference_excitations(n_spin_orbitals, n_electrons)?
        .iter()
        .map(|ex| excitation_element(ex, n_spin_orbitals, kind))
        .collect::<Result<Vec<_>>>()?;
    Ansatz::from_elements(n_spin_orbitals, elements)
}

/// Generalized spin-conserving singles over all spin-orbital pairs, then
/// paired doubles moving both electrons of spatial orbital `q` into `p`.
pub fn upccgsd_block(n_spin_orbitals: usize) -> Vec<Excitation> {
    let mut out = Vec::new();
    for from in 0..n_spin_orbitals {
        for to in from + 1..n_spin_orbitals {
            if from % 2 == to % 2 {
                out.push(Excitation::Single { from, to });
            }
        }
    }
    let n_spatial = n_spin_orbitals / 2;
    for q in 0..n_spatial {
        for p in q + 1..n_spatial {
            out.push(Excitation::Double {
                from: (2 * q, 2 * q + 1),
                to: (2 * p, 2 * p + 1),
            });
        }
    }
    out
}

/// `k` repetitions of the UpCCGSD block with independent parameters.
pub fn build_kupccgsd(n_spin_orbitals: usize, n_electrons: usize, k: usize) -> Result<Ansatz> {
    if k < 1 {
        return Err(Error::InvalidArgument("k-UpCCGSD needs k >= 1".into()));
    }
    if n_electrons == 0 || n_electrons >= n_spin_orbitals || n_spin_orbitals % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "invalid k-UpCCGSD sizes: {n_electrons} electrons in {n_spin_orbitals} spin-orbitals"
        )));
    }
    let block = upccgsd_block(n_spin_orbitals);
    let mut ansatz = Ansatz::new(n_spin_orbitals);
    for rep in 0..k {
        for ex in &block {
            let e = excitation_element(ex, n_spin_orbitals, PoolKind::Fermionic)?;
            let label = format!("k{rep}:{}", e.label());
            ansatz.push(e.relabeled(label))?;
        }
    }
    Ok(ansatz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uccsd_h2_has_three_elements() {
        let a = build_uccsd(4, 2, PoolKind::Fermionic).unwrap();
        assert_eq!(a.n_params(), 3);
        assert!(build_uccsd(4, 2, PoolKind::QubitPauli).is_err());
    }

    #[test]
    fn kupccgsd_parameter_count_scales_with_k() {
        let one = build_kupccgsd(8, 4, 1).unwrap();
        let two = build_kupccgsd(8, 4, 2).unwrap();
        // singles: 2 * C(4, 2) = 12, paired doubles: C(4, 2) = 6
        assert_eq!(one.n_params(), 18);
        assert_eq!(two.n_params(), 2 * one.n_params());
        assert!(build_kupccgsd(8, 4, 0).is_err());
    }
}
