//! Second-quantized molecular Hamiltonian over interleaved spin-orbitals.
//!
//! Spatial orbital `p` maps to spin-orbitals `2p` (up) and `2p + 1` (down).
//! The chemist-order integral `(pq|rs)` is the coefficient of
//! `1/2 a+_{p s} a+_{r t} a_{s t} a_{q s}` (spins `s`, `t` summed), i.e. the
//! physicist integral `<pr|qs>` with index map `(p, q, r, s) -> (p, r, s, q)`
//! on the operator string.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fcidump::MolecularIntegrals;
use crate::error::{Error, Result};
use crate::operators::{FermionOperator, Ladder};

/// Spatial orbitals removed from the active space.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrozenCoreSpec {
    /// Doubly occupied in every determinant; folded into the core energy.
    pub frozen_occupied: Vec<usize>,
    /// Never occupied; dropped.
    pub frozen_virtual: Vec<usize>,
}

impl FrozenCoreSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen_occupied.is_empty() && self.frozen_virtual.is_empty()
    }
}

/// Active-space Hamiltonian produced by [`build_hamiltonian`].
#[derive(Debug, Clone)]
pub struct ActiveSpaceHamiltonian {
    /// Electronic part; the constant lives in `core_energy`.
    pub operator: FermionOperator,
    pub n_spin_orbitals: usize,
    pub n_electrons: usize,
    /// Nuclear repulsion plus frozen-orbital contributions.
    pub core_energy: f64,
    /// Effective active-space integrals the operator was built from.
    pub active: MolecularIntegrals,
}

/// Active orbital indices in ascending order after validation.
fn active_orbitals(ints: &MolecularIntegrals, frozen: &FrozenCoreSpec) -> Result<Vec<usize>> {
    let n = ints.n_orbitals;
    for &i in frozen.frozen_occupied.iter().chain(&frozen.frozen_virtual) {
        if i >= n {
            return Err(Error::Dimension(format!(
                "frozen orbital {i} out of range for {n} orbitals"
            )));
        }
    }
    for &i in &frozen.frozen_occupied {
        if frozen.frozen_virtual.contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "orbital {i} frozen as both occupied and virtual"
            )));
        }
    }
    let mut occ = frozen.frozen_occupied.clone();
    occ.sort_unstable();
    occ.dedup();
    if occ.len() != frozen.frozen_occupied.len() {
        return Err(Error::InvalidArgument("duplicate frozen-occupied orbital".into()));
    }
    if 2 * occ.len() > ints.n_electrons {
        return Err(Error::InvalidArgument(format!(
            "{} frozen-occupied orbitals need {} electrons, only {} available",
            occ.len(),
            2 * occ.len(),
            ints.n_electrons
        )));
    }
    Ok((0..n)
        .filter(|i| !frozen.frozen_occupied.contains(i) && !frozen.frozen_virtual.contains(i))
        .collect())
}

/// Folds frozen orbitals into effective integrals over the active space.
pub fn freeze_orbitals(
    ints: &MolecularIntegrals,
    frozen: &FrozenCoreSpec,
) -> Result<MolecularIntegrals> {
    let active = active_orbitals(ints, frozen)?;
    let core = &frozen.frozen_occupied;
    let n_active_electrons = ints.n_electrons - 2 * core.len();

    let mut core_energy = ints.core_energy;
    for &i in core {
        core_energy += 2.0 * ints.h(i, i);
        for &j in core {
            core_energy += 2.0 * ints.g(i, i, j, j) - ints.g(i, j, j, i);
        }
    }

    let mut out = MolecularIntegrals::zeros(active.len(), n_active_electrons);
    out.core_energy = core_energy;
    out.ms2 = ints.ms2;
    out.isym = ints.isym;
    out.orbsym = active.iter().map(|&i| ints.orbsym.get(i).copied().unwrap_or(1)).collect();
    for (a, &p) in active.iter().enumerate() {
        for (b, &q) in active.iter().enumerate() {
            let mut h = ints.h(p, q);
            for &i in core {
                h += 2.0 * ints.g(p, q, i, i) - ints.g(p, i, i, q);
            }
            out.set_h(a, b, h);
            for (c, &r) in active.iter().enumerate() {
                for (d, &s) in active.iter().enumerate() {
                    out.set_g(a, b, c, d, ints.g(p, q, r, s));
                }
            }
        }
    }
    Ok(out)
}

/// Assembles `H = sum h_pq a+ a + 1/2 sum (pq|rs) a+ a+ a a` over the
/// active spin-orbitals.
pub fn build_hamiltonian(
    ints: &MolecularIntegrals,
    frozen: &FrozenCoreSpec,
) -> Result<ActiveSpaceHamiltonian> {
    let active = freeze_orbitals(ints, frozen)?;
    let n = active.n_orbitals;
    let mut op = FermionOperator::new();
    let c = |v: f64| Complex64::new(v, 0.0);

    for p in 0..n {
        for q in 0..n {
            let h = active.h(p, q);
            if h == 0.0 {
                continue;
            }
            for spin in 0..2 {
                op.push(
                    c(h),
                    vec![Ladder::create(2 * p + spin), Ladder::annihilate(2 * q + spin)],
                );
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let g = active.g(p, q, r, s);
                    if g == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            let (ps, qs) = (2 * p + sigma, 2 * q + sigma);
                            let (rt, st) = (2 * r + tau, 2 * s + tau);
                            if ps == rt || qs == st {
                                continue;
                            }
                            op.push(
                                c(0.5 * g),
                                vec![
                                    Ladder::create(ps),
                                    Ladder::create(rt),
                                    Ladder::annihilate(st),
                                    Ladder::annihilate(qs),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(ActiveSpaceHamiltonian {
        operator: op,
        n_spin_orbitals: 2 * n,
        n_electrons: active.n_electrons,
        core_energy: active.core_energy,
        active,
    })
}
