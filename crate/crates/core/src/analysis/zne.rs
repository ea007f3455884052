//! Linear zero-noise extrapolation by noise amplification.

use serde::{Deserialize, Serialize};

use super::sweep::{delta_e_at, validate_grid};
use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::problem::MolecularProblem;
use crate::sim::{NoiseModel, NoiseScheme, SimOptions};

/// Multiplier used unless configured otherwise.
pub const DEFAULT_ZNE_MULTIPLIER: f64 = 3.0;

/// `(m E(p) - E(mp)) / (m - 1)`: the straight line through `(p, E(p))` and
/// `(mp, E(mp))` evaluated at zero noise.
pub fn zne_linear(e_at_p: f64, e_at_mp: f64, m: f64) -> Result<f64> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "ZNE multiplier must exceed 1, got {m}"
        )));
    }
    Ok((m * e_at_p - e_at_mp) / (m - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZnePoint {
    pub p: f64,
    /// `Delta E(p)`.
    pub raw: f64,
    /// `Delta E(mp)`.
    pub amplified: f64,
    /// Extrapolated `Delta E`.
    pub mitigated: f64,
}

/// Raw, amplified and extrapolated accuracy at one noise level.
pub fn zne_point(
    problem: &MolecularProblem,
    ansatz: &Ansatz,
    params: &[f64],
    p: f64,
    scheme: NoiseScheme,
    m: f64,
    sim: &SimOptions,
) -> Result<ZnePoint> {
    let noise = NoiseModel::new(p, scheme);
    let raw = delta_e_at(problem, ansatz, params, &noise, sim)?;
    let noise_m = noise.amplified(m);
    noise_m.effective_p()?;
    let amplified = delta_e_at(problem, ansatz, params, &noise_m, sim)?;
    // E_FCI cancels: the extrapolation is affine with weights summing to one
    let mitigated = zne_linear(raw, amplified, m)?;
    Ok(ZnePoint {
        p,
        raw,
        amplified,
        mitigated,
    })
}

/// [`zne_point`] over a grid; the multiplier is validated before any run.
pub fn zne_sweep(
    problem: &MolecularProblem,
    ansatz: &Ansatz,
    params: &[f64],
    p_values: &[f64],
    scheme: NoiseScheme,
    m: f64,
    sim: &SimOptions,
) -> Result<Vec<ZnePoint>> {
    zne_linear(0.0, 0.0, m)?;
    validate_grid(p_values, m)?;
    use rayon::prelude::*;
    p_values
        .par_iter()
        .map(|&p| zne_point(problem, ansatz, params, p, scheme, m, sim))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_linear_model() {
        let (e0, chi, p) = (-1.137, 2.5, 1e-4);
        let got = zne_linear(e0 + chi * p, e0 + chi * 3.0 * p, 3.0).unwrap();
        assert!((got - e0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_bias() {
        let (e0, chi, q, p) = (0.5, 1.0, 4.0, 1e-2);
        let e = |x: f64| e0 + chi * x + q * x * x;
        let got = zne_linear(e(p), e(3.0 * p), 3.0).unwrap();
        assert!((got - e0 - (-3.0 * q * p * p)).abs() < 1e-12);
    }

    #[test]
    fn multiplier_must_exceed_one() {
        assert!(zne_linear(0.0, 0.0, 1.0).is_err());
        assert!(zne_linear(0.0, 0.0, 0.5).is_err());
    }
}
