//! Noise sweeps over ansatz prefixes, optimal truncation and p_c crossings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adapt::{ansatz_energy, Prefix};
use crate::ansatz::Ansatz;
use crate::error::{Error, Result};
use crate::problem::MolecularProblem;
use crate::sim::{cnot_count, NoiseModel, NoiseScheme, SimOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Prefix length.
    pub n: usize,
    pub n_ii: usize,
    /// `E_n(p)` for every grid `p`.
    pub energies: Vec<f64>,
    /// `E_n(p) - E_FCI`.
    pub delta_e: Vec<f64>,
}

/// `Delta E(p, n)` over a grid of noise levels and prefix lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub label: String,
    pub scheme: NoiseScheme,
    pub multiplier: f64,
    pub p_values: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn delta_e(&self, row: usize, col: usize) -> f64 {
        self.rows[row].delta_e[col]
    }
}

pub fn validate_grid(p_values: &[f64], multiplier: f64) -> Result<()> {
    if p_values.is_empty() {
        return Err(Error::InvalidArgument("empty p grid".into()));
    }
    for w in p_values.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "p grid must be strictly ascending ({} before {})",
                w[0], w[1]
            )));
        }
    }
    for &p in p_values {
        NoiseModel::new(p, NoiseScheme::GateByGate)
            .amplified(multiplier)
            .effective_p()?;
    }
    Ok(())
}

/// Evaluates every `(n, p)` cell independently; cells are computed in
/// parallel and stored by grid index, so the table does not depend on the
/// worker count.
pub fn sweep_noise(
    problem: &MolecularProblem,
    prefixes: &[Prefix],
    p_values: &[f64],
    scheme: NoiseScheme,
    multiplier: f64,
    sim: &SimOptions,
) -> Result<SweepTable> {
    validate_grid(p_values, multiplier)?;
    if prefixes.is_empty() {
        return Err(Error::InvalidArgument("no prefixes to sweep".into()));
    }
    let cols = p_values.len();
    let energies: Vec<f64> = (0..prefixes.len() * cols)
        .into_par_iter()
        .map(|cell| {
            let (row, col) = (cell / cols, cell % cols);
            let prefix = &prefixes[row];
            let noise = NoiseModel::new(p_values[col], scheme).amplified(multiplier);
            ansatz_energy(
                &prefix.ansatz,
                &prefix.params,
                &problem.hamiltonian,
                &problem.reference,
                &noise,
                sim,
            )
            .map_err(|e| e.context(format!("sweep cell p = {}, n = {}", p_values[col], prefix.n)))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = prefixes
        .iter()
        .zip(energies.chunks(cols))
        .map(|(prefix, e)| SweepRow {
            n: prefix.n,
            n_ii: cnot_count(&prefix.ansatz),
            energies: e.to_vec(),
            delta_e: e.iter().map(|&x| problem.delta_e(x)).collect(),
        })
        .collect();
    Ok(SweepTable {
        label: problem.label.clone(),
        scheme,
        multiplier,
        p_values: p_values.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPoint {
    pub p: f64,
    pub n_opt: usize,
    pub delta_e: f64,
}

/// The prefix length minimizing `Delta E(p, n)` at every grid `p`, smallest
/// `n` on ties.
pub fn optimal_truncation(table: &SweepTable) -> Result<Vec<TruncationPoint>> {
    if table.rows.is_empty() || table.p_values.is_empty() {
        return Err(Error::InvalidArgument("empty sweep table".into()));
    }
    Ok(table
        .p_values
        .iter()
        .enumerate()
        .map(|(col, &p)| {
            let mut best = &table.rows[0];
            for row in &table.rows[1..] {
                if row.delta_e[col] < best.delta_e[col]
                    || (row.delta_e[col] == best.delta_e[col] && row.n < best.n)
                {
                    best = row;
                }
            }
            TruncationPoint {
                p,
                n_opt: best.n,
                delta_e: best.delta_e[col],
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Refined crossing, or `None` when even the smallest grid `p` misses.
    pub p_c: Option<f64>,
    /// Grid points bracketing the crossing.
    pub bracket: Option<(f64, f64)>,
    /// Every grid point meets the threshold; `p_c` is the grid maximum.
    pub saturated: bool,
    pub grid_values: Vec<f64>,
}

/// Largest grid `p` whose `metric(p)` is within `threshold`, refined by
/// log-space bisection against the next grid point until the bracket ratio
/// is below `1 + rel_tol`.
pub fn sweep_crossing<F>(grid: &[f64], threshold: f64, rel_tol: f64, metric: F) -> Result<Crossing>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    validate_grid(grid, 1.0)?;
    let grid_values = grid
        .par_iter()
        .map(|&p| metric(p))
        .collect::<Result<Vec<_>>>()?;
    let Some(last_ok) = grid_values.iter().rposition(|&v| v <= threshold) else {
        return Ok(Crossing {
            p_c: None,
            bracket: None,
            saturated: false,
            grid_values,
        });
    };
    if last_ok + 1 == grid.len() {
        return Ok(Crossing {
            p_c: Some(grid[last_ok]),
            bracket: None,
            saturated: true,
            grid_values,
        });
    }
    let (mut lo, mut hi) = (grid[last_ok], grid[last_ok + 1]);
    let bracket = Some((lo, hi));
    while lo == 0.0 || hi / lo > 1.0 + rel_tol {
        let mid = if lo == 0.0 { hi / 2.0 } else { (lo * hi).sqrt() };
        if metric(mid)? <= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi < 1e-300 {
            break;
        }
    }
    Ok(Crossing {
        p_c: Some(lo),
        bracket,
        saturated: false,
        grid_values,
    })
}

/// `Delta E(p)` of one circuit.
pub fn delta_e_at(
    problem: &MolecularProblem,
    ansatz: &Ansatz,
    params: &[f64],
    noise: &NoiseModel,
    sim: &SimOptions,
) -> Result<f64> {
    Ok(problem.delta_e(ansatz_energy(
        ansatz,
        params,
        &problem.hamiltonian,
        &problem.reference,
        noise,
        sim,
    )?))
}

/// Logarithmically spaced grid `lo .. hi` with `points` entries.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}
