//! Grows a QEB-ADAPT ansatz for H2 and compares the linear p_c estimate with
//! the density-matrix crossing of chemical accuracy.

use noisyvqe::adapt::{adapt_run, AdaptConfig, CHEMICAL_ACCURACY};
use noisyvqe::analysis::{delta_e_at, estimate_pc, log_grid, noise_susceptibility, sweep_crossing};
use noisyvqe::sim::SimOptions;
use noisyvqe::{bundled, NoiseModel, NoiseScheme};

fn main() -> noisyvqe::Result<()> {
    let problem = bundled::h2();
    let record = adapt_run(&problem, &AdaptConfig::default())?;
    let (ansatz, params) = (&record.ansatz, record.final_params());
    println!(
        "{} elements, E = {:.10} Ha (FCI {:.10})",
        ansatz.len(),
        record.final_energy(),
        problem.fci_energy
    );
    for scheme in [NoiseScheme::GateByGate, NoiseScheme::ElementByElement] {
        let report = noise_susceptibility(ansatz, params, &problem.hamiltonian, &problem.reference, scheme)?;
        let linear = estimate_pc(&report, problem.delta_e(report.energy));
        let crossing = sweep_crossing(&log_grid(1e-6, 1e-2, 9), CHEMICAL_ACCURACY, 0.05, |p| {
            delta_e_at(&problem, ansatz, params, &NoiseModel::new(p, scheme), &SimOptions::default())
        })?;
        println!(
            "{}: chi = {:.3} Ha, N_II = {}, p_c linear {:.3e}, swept {:.3e}",
            scheme.as_str(),
            report.chi,
            report.n_ii,
            linear.value().unwrap_or(f64::NAN),
            crossing.p_c.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
