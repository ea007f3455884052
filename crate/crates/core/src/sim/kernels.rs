//! In-place amplitude kernels over a flat register of `2^m` complex entries.
//!
//! A density matrix on `n` qubits is stored as a `2n`-qubit "superket" with
//! index `row * 2^n + col`, so a unitary `U` on qubit `q` acts as `U` on bit
//! `q + n` and as `conj(U)` on bit `q`.

use num_complex::Complex64;

use crate::operators::pauli::i_pow;

pub(crate) type Mat2 = [[Complex64; 2]; 2];

pub(crate) fn conj2(u: &Mat2) -> Mat2 {
    [
        [u[0][0].conj(), u[0][1].conj()],
        [u[1][0].conj(), u[1][1].conj()],
    ]
}

#[inline]
pub(crate) fn apply_single(amps: &mut [Complex64], bit: usize, u: &Mat2) {
    let stride = 1usize << bit;
    let [[u00, u01], [u10, u11]] = *u;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = u00 * x + u01 * y;
            *b = u10 * x + u11 * y;
        }
    }
}

#[inline]
pub(crate) fn apply_diagonal(amps: &mut [Complex64], bit: usize, d0: Complex64, d1: Complex64) {
    let stride = 1usize << bit;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        lo.iter_mut().for_each(|a| *a *= d0);
        hi.iter_mut().for_each(|b| *b *= d1);
    }
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for k in 0..amps.len() {
        if k & cmask != 0 && k & tmask == 0 {
            amps.swap(k, k | tmask);
        }
    }
}

#[inline]
fn sign_phase(base: Complex64, k: usize, z: u64) -> Complex64 {
    if (k as u64 & z).count_ones() % 2 == 0 {
        base
    } else {
        -base
    }
}

/// `amps <- P amps` for the Pauli string with masks `(x, z)` and `y_count` Y factors.
pub(crate) fn apply_pauli(amps: &mut [Complex64], x: u64, z: u64, y_count: u32) {
    let base = i_pow(y_count);
    if x == 0 {
        for (k, a) in amps.iter_mut().enumerate() {
            *a *= sign_phase(base, k, z);
        }
        return;
    }
    let high = 1usize << (63 - x.leading_zeros());
    let xs = x as usize;
    for k in 0..amps.len() {
        if k & high != 0 {
            continue;
        }
        let k2 = k ^ xs;
        let (a, b) = (amps[k], amps[k2]);
        amps[k] = sign_phase(base, k2, z) * b;
        amps[k2] = sign_phase(base, k, z) * a;
    }
}

/// `amps <- exp(i phi P) amps = cos(phi) amps + i sin(phi) P amps`.
pub(crate) fn apply_pauli_rotation(amps: &mut [Complex64], x: u64, z: u64, y_count: u32, phi: f64) {
    let (s, c) = phi.sin_cos();
    let is = Complex64::new(0.0, s);
    let base = i_pow(y_count);
    if x == 0 {
        let plus = Complex64::new(c, 0.0) + is * base;
        let minus = Complex64::new(c, 0.0) - is * base;
        for (k, a) in amps.iter_mut().enumerate() {
            *a *= if (k as u64 & z).count_ones() % 2 == 0 {
                plus
            } else {
                minus
            };
        }
        return;
    }
    let high = 1usize << (63 - x.leading_zeros());
    let xs = x as usize;
    for k in 0..amps.len() {
        if k & high != 0 {
            continue;
        }
        let k2 = k ^ xs;
        let (a, b) = (amps[k], amps[k2]);
        amps[k] = c * a + is * sign_phase(base, k2, z) * b;
        amps[k2] = c * b + is * sign_phase(base, k, z) * a;
    }
}

/// Single-qubit depolarizing channel on a density superket with `n` qubits.
pub(crate) fn apply_depolarizing(rho: &mut [Complex64], n: usize, qubit: usize, p: f64) {
    let row = 1usize << (qubit + n);
    let col = 1usize << qubit;
    let keep = 1.0 - 2.0 * p / 3.0;
    let flip = 2.0 * p / 3.0;
    let off = 1.0 - 4.0 * p / 3.0;
    for k in 0..rho.len() {
        if k & (row | col) != 0 {
            continue;
        }
        let (i00, i01, i10, i11) = (k, k | col, k | row, k | row | col);
        let (a, d) = (rho[i00], rho[i11]);
        rho[i00] = keep * a + flip * d;
        rho[i11] = flip * a + keep * d;
        rho[i01] *= off;
        rho[i10] *= off;
    }
}
