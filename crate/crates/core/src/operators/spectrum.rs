use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::qubit_operator::QubitOperator;
use crate::error::{Error, Result};

/// Default register size above which dense diagonalization is refused.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// Extremal eigenpairs of a Hermitian qubit operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    pub ground_state: Vec<Complex64>,
    pub max_energy: f64,
}

impl SpectrumResult {
    pub fn spectral_range(&self) -> f64 {
        self.max_energy - self.ground_energy
    }
}

/// Dense diagonalization with the default size limit.
pub fn exact_spectrum(h: &QubitOperator) -> Result<SpectrumResult> {
    exact_spectrum_with_limit(h, DEFAULT_DENSE_LIMIT)
}

/// Ground and highest eigenvalue of the `2^n` dense matrix of `h`.
///
/// A real matrix goes through the real-symmetric solver. A complex Hermitian
/// `A + iB` goes through the real embedding `[[A, -B], [B, A]]`, whose
/// spectrum is that of the original with every eigenvalue doubled.
pub fn exact_spectrum_with_limit(h: &QubitOperator, limit: usize) -> Result<SpectrumResult> {
    h.ensure_hermitian()?;
    let n = h.n_qubits();
    if n > limit {
        return Err(Error::TooLarge {
            what: "dense diagonalization",
            n_qubits: n,
            limit,
        });
    }
    let dense = h.to_dense();
    let dim = dense.nrows();
    let is_real = dense.iter().all(|c| c.im.abs() < 1e-14);

    let (ground_energy, max_energy, ground_state) = if is_real {
        let real = DMatrix::from_fn(dim, dim, |i, j| 0.5 * (dense[(i, j)].re + dense[(j, i)].re));
        let eig = SymmetricEigen::new(real);
        let (imin, imax) = extremal_indices(eig.eigenvalues.as_slice());
        let v: Vec<Complex64> = eig
            .eigenvectors
            .column(imin)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        (eig.eigenvalues[imin], eig.eigenvalues[imax], v)
    } else {
        let embed = DMatrix::from_fn(2 * dim, 2 * dim, |i, j| {
            let (bi, ri) = (i / dim, i % dim);
            let (bj, rj) = (j / dim, j % dim);
            let herm = 0.5 * (dense[(ri, rj)] + dense[(rj, ri)].conj());
            match (bi, bj) {
                (0, 0) | (1, 1) => herm.re,
                (0, 1) => -herm.im,
                _ => herm.im,
            }
        });
        let eig = SymmetricEigen::new(embed);
        let (imin, imax) = extremal_indices(eig.eigenvalues.as_slice());
        let col = eig.eigenvectors.column(imin);
        let v: Vec<Complex64> = (0..dim)
            .map(|k| Complex64::new(col[k], col[k + dim]))
            .collect();
        (eig.eigenvalues[imin], eig.eigenvalues[imax], v)
    };

    let norm = ground_state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ground_state = ground_state.into_iter().map(|c| c / norm).collect();
    Ok(SpectrumResult {
        ground_energy,
        ground_state,
        max_energy,
    })
}

fn extremal_indices(values: &[f64]) -> (usize, usize) {
    let mut imin = 0;
    let mut imax = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        if v > values[imax] {
            imax = i;
        }
    }
    (imin, imax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::pauli::PauliString;

    fn op(n: usize, terms: &[(&str, Complex64)]) -> QubitOperator {
        QubitOperator::from_terms(
            n,
            terms
                .iter()
                .map(|(s, c)| (PauliString::parse(n, s).unwrap(), *c)),
        )
        .unwrap()
    }

    #[test]
    fn z0_spectrum() {
        let s = exact_spectrum(&op(1, &[("Z0", Complex64::new(1.0, 0.0))])).unwrap();
        assert!((s.ground_energy + 1.0).abs() < 1e-14);
        assert!((s.max_energy - 1.0).abs() < 1e-14);
        assert!(s.ground_state[0].norm() < 1e-12);
        assert!((s.ground_state[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z0z1_plus_half_x0() {
        // Blocks by b1: b1 = 0 gives [[1, .5], [.5, -1]], b1 = 1 gives [[-1, .5], [.5, 1]];
        // both have eigenvalues +-sqrt(1.25).
        let h = op(
            2,
            &[("Z0 Z1", Complex64::new(1.0, 0.0)), ("X0", Complex64::new(0.5, 0.0))],
        );
        let s = exact_spectrum(&h).unwrap();
        let r = 1.25f64.sqrt();
        assert!((s.ground_energy + r).abs() < 1e-12);
        assert!((s.max_energy - r).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_path() {
        // Y0 has eigenvalues -1, +1 and a complex eigenvector.
        let h = op(1, &[("Y0", Complex64::new(1.0, 0.0)), ("Z0", Complex64::new(0.3, 0.0))]);
        let s = exact_spectrum(&h).unwrap();
        let r = (1.0f64 + 0.09).sqrt();
        assert!((s.ground_energy + r).abs() < 1e-12);
        let m = h.to_dense();
        let v = nalgebra::DVector::from_vec(s.ground_state.clone());
        let hv = &m * &v;
        let resid = hv - v * Complex64::new(s.ground_energy, 0.0);
        assert!(resid.norm() < 1e-10);
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = op(1, &[("Z0", Complex64::new(0.0, 1.0))]);
        assert!(matches!(exact_spectrum(&h), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn size_limit_enforced() {
        let h = op(3, &[("Z2", Complex64::new(1.0, 0.0))]);
        assert!(matches!(
            exact_spectrum_with_limit(&h, 2),
            Err(Error::TooLarge { .. })
        ));
    }
}
