//! Scaling of `p_c` with the number of noisy gates.

use serde::{Deserialize, Serialize};

use super::susceptibility::SusceptibilityReport;
use crate::adapt::{ansatz_energy, CHEMICAL_ACCURACY};
use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::problem::MolecularProblem;
use crate::sim::{NoiseModel, NoiseScheme, SimOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// Least-squares slope of `log p_c` against `log N_II`.
    pub slope: f64,
    /// Intercept in base-10 logarithms.
    pub intercept: f64,
    pub delta_e_min: f64,
    pub delta_e_max: f64,
    /// `log10(delta_e_max / delta_e_min)`.
    pub delta_e_decades: f64,
}

/// Fits `p_c = Delta E_C / chi` against `N_II` on a log-log scale.
pub fn pc_scaling_fit(reports: &[SusceptibilityReport]) -> Result<ScalingFit> {
    if reports.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "scaling fit needs at least 5 reports, got {}",
            reports.len()
        )));
    }
    let mut xs = Vec::with_capacity(reports.len());
    let mut ys = Vec::with_capacity(reports.len());
    let mut de = Vec::with_capacity(reports.len());
    for r in reports {
        if r.n_ii == 0 || r.chi <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "report with N_II = {} and chi = {} has no finite p_c",
                r.n_ii, r.chi
            )));
        }
        xs.push((r.n_ii as f64).log10());
        ys.push((CHEMICAL_ACCURACY / r.chi).log10());
        de.push(r.delta_e.unwrap_or(0.0));
    }
    let (xmin, xmax) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if xmax - xmin < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "N_II spans {:.2} decades, at least one is needed",
            xmax - xmin
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let delta_e_min = de.iter().copied().fold(f64::INFINITY, f64::min);
    let delta_e_max = de.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit {
        slope,
        intercept: my - slope * mx,
        delta_e_min,
        delta_e_max,
        delta_e_decades: (delta_e_max / delta_e_min).log10(),
    })
}

/// One-sided second-order derivative `(-3E(0) + 4E(h) - E(2h)) / 2h` of the
/// density-matrix energy; negative probabilities are not representable.
pub fn density_slope(
    problem: &MolecularProblem,
    ansatz: &Ansatz,
    params: &[f64],
    scheme: NoiseScheme,
    step: f64,
    sim: &SimOptions,
) -> Result<f64> {
    let forced = SimOptions {
        force_density: true,
        ..*sim
    };
    let e = |p: f64| {
        ansatz_energy(
            ansatz,
            params,
            &problem.hamiltonian,
            &problem.reference,
            &NoiseModel::new(p, scheme),
            &forced,
        )
    };
    Ok((-3.0 * e(0.0)? + 4.0 * e(step)? - e(2.0 * step)?) / (2.0 * step))
}
