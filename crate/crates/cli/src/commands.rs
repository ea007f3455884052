//! Subcommand implementations.

use std::path::Path;

use serde::Serialize;

use noisyvqe::adapt::{
    adapt_run, optimize_parameters, truncation_prefixes, AdaptRecord, AdaptStatus, Prefix, CHEMICAL_ACCURACY,
};
use noisyvqe::analysis::{
    estimate_pc, noise_susceptibility, optimal_truncation, sweep_crossing, sweep_noise, zne_sweep, Crossing,
    PcEstimate, SusceptibilityReport, TruncationPoint, ZnePoint,
};
use noisyvqe::ansatz::{build_kupccgsd, build_uccsd, Ansatz};
use noisyvqe::chem::{build_hamiltonian, parse_fcidump, MolecularIntegrals};
use noisyvqe::sim::NoiseModel;
use noisyvqe::{Error, MolecularProblem};

use crate::config::{AnsatzChoice, ExperimentConfig, BUNDLED_PREFIX};
use crate::output::{float, OutputDir};
use crate::CliError;

/// Relative width of the refined crossing bracket.
const CROSSING_REL_TOL: f64 = 0.05;

fn read_integrals(cfg: &ExperimentConfig) -> Result<(String, MolecularIntegrals), CliError> {
    if let Some(name) = cfg.fcidump.strip_prefix(BUNDLED_PREFIX) {
        let (_, text) = noisyvqe::bundled::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .expect("validated bundled name");
        return Ok((name.to_string(), parse_fcidump(text)?));
    }
    let path = Path::new(&cfg.fcidump);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let ints = parse_fcidump(&text).map_err(|e| e.context(path.display().to_string()))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok((label, ints))
}

/// Active qubits implied by the config, checked against the dense limit
/// before any Hamiltonian is assembled.
fn check_size(cfg: &ExperimentConfig, ints: &MolecularIntegrals) -> Result<usize, CliError> {
    let frozen = cfg.frozen_occupied.len() + cfg.frozen_virtual.len();
    let n_qubits = 2 * ints.n_orbitals.saturating_sub(frozen);
    if n_qubits > cfg.dense_limit {
        return Err(Error::TooLarge {
            what: "active space",
            n_qubits,
            limit: cfg.dense_limit,
        }
        .into());
    }
    Ok(n_qubits)
}

pub fn load_problem(cfg: &ExperimentConfig) -> Result<MolecularProblem, CliError> {
    let (label, ints) = read_integrals(cfg)?;
    check_size(cfg, &ints)?;
    Ok(MolecularProblem::from_integrals(label, &ints, &cfg.frozen(), cfg.dense_limit)?)
}

#[derive(Serialize)]
struct FciSummary {
    problem: String,
    n_qubits: usize,
    n_electrons: usize,
    core_energy: f64,
    fci_energy: f64,
    max_energy: f64,
    hartree_fock_energy: f64,
}

pub fn fci(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    let (label, ints) = read_integrals(cfg)?;
    check_size(cfg, &ints)?;
    let active = build_hamiltonian(&ints, &cfg.frozen())?;
    let summary = if active.n_spin_orbitals == 0 {
        // nothing left to diagonalize: the spectrum is the constant
        FciSummary {
            problem: label,
            n_qubits: 0,
            n_electrons: 0,
            core_energy: active.core_energy,
            fci_energy: active.core_energy,
            max_energy: active.core_energy,
            hartree_fock_energy: active.core_energy,
        }
    } else {
        let p = MolecularProblem::from_integrals(label, &ints, &cfg.frozen(), cfg.dense_limit)?;
        FciSummary {
            hartree_fock_energy: p.hartree_fock_energy()?,
            problem: p.label,
            n_qubits: p.n_qubits,
            n_electrons: p.n_electrons,
            core_energy: p.core_energy,
            fci_energy: p.fci_energy,
            max_energy: p.max_energy,
        }
    };
    out.write_json("fci.json", &summary)?;
    println!("E_FCI = {:.12} Ha", summary.fci_energy);
    println!("E_max = {:.12} Ha", summary.max_energy);
    Ok(0)
}

/// Circuits an analysis command works on: every ADAPT prefix, or the single
/// optimized fixed ansatz.
pub struct Circuits {
    pub prefixes: Vec<Prefix>,
    pub record: Option<AdaptRecord>,
}

impl Circuits {
    pub fn last(&self) -> &Prefix {
        self.prefixes.last().expect("at least the reference prefix")
    }
}

pub fn prepare_circuits(cfg: &ExperimentConfig, problem: &MolecularProblem) -> Result<Circuits, CliError> {
    let adapt = cfg.adapt_config();
    let ansatz = match cfg.ansatz {
        AnsatzChoice::Adapt => {
            let record = adapt_run(problem, &adapt)?;
            return Ok(Circuits {
                prefixes: truncation_prefixes(&record)?,
                record: Some(record),
            });
        }
        AnsatzChoice::Uccsd => build_uccsd(problem.n_qubits, problem.n_electrons, cfg.pool)?,
        AnsatzChoice::Kupccgsd => build_kupccgsd(problem.n_qubits, problem.n_electrons, cfg.k)?,
    };
    let params = optimize_fixed(cfg, problem, &ansatz)?;
    Ok(Circuits {
        prefixes: vec![Prefix {
            n: ansatz.len(),
            ansatz,
            params,
        }],
        record: None,
    })
}

fn optimize_fixed(cfg: &ExperimentConfig, problem: &MolecularProblem, ansatz: &Ansatz) -> Result<Vec<f64>, CliError> {
    let adapt = cfg.adapt_config();
    let out = optimize_parameters(
        ansatz,
        &vec![0.0; ansatz.n_params()],
        &problem.hamiltonian,
        &problem.reference,
        &adapt.noise,
        &adapt.optimizer_settings(),
        &adapt.sim,
    )?;
    Ok(out.x)
}

pub fn status_exit_code(status: AdaptStatus) -> i32 {
    match status {
        AdaptStatus::Converged | AdaptStatus::HaltedByEpsilon | AdaptStatus::ReachedEpsilonT => 0,
        AdaptStatus::Stalled => crate::EXIT_STALLED,
        AdaptStatus::MaxIterations => crate::EXIT_RESOURCE,
    }
}

pub fn adapt(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    if cfg.ansatz != AnsatzChoice::Adapt {
        return Err(CliError::Config(crate::config::ConfigError {
            key: Some("ansatz".into()),
            message: "the adapt command needs ansatz = \"adapt\"".into(),
        }));
    }
    let problem = load_problem(cfg)?;
    let record = adapt_run(&problem, &cfg.adapt_config())?;
    out.write_json("adapt.json", &record)?;
    let mut rows = vec![vec![
        "0".into(),
        "reference".into(),
        float(record.reference_energy),
        float(problem.delta_e(record.reference_energy)),
        "0".into(),
    ]];
    for it in &record.iterations {
        rows.push(vec![
            it.n.to_string(),
            it.label.clone(),
            float(it.energy),
            float(it.delta_e),
            it.n_ii.to_string(),
        ]);
    }
    out.write_csv("adapt.csv", &["n", "label", "energy", "delta_e", "n_ii"], &rows)?;
    println!(
        "{}: {} after {} iterations, E = {:.12} Ha, dE = {:.3e} Ha",
        problem.label,
        record.status.as_str(),
        record.iterations.len(),
        record.final_energy(),
        problem.delta_e(record.final_energy())
    );
    Ok(status_exit_code(record.status))
}

pub fn sweep(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    let problem = load_problem(cfg)?;
    let circuits = prepare_circuits(cfg, &problem)?;
    let table = sweep_noise(
        &problem,
        &circuits.prefixes,
        &cfg.p_values,
        cfg.scheme,
        1.0,
        &cfg.sim_options(),
    )?;
    let scheme = cfg.scheme.as_str().to_string();
    let mut rows = Vec::new();
    for row in &table.rows {
        for (col, &p) in table.p_values.iter().enumerate() {
            rows.push(vec![
                float(p),
                row.n.to_string(),
                float(row.delta_e[col]),
                row.n_ii.to_string(),
                scheme.clone(),
            ]);
        }
    }
    out.write_csv("sweep.csv", &["p", "n", "delta_e", "n_ii", "scheme"], &rows)?;
    let truncation = optimal_truncation(&table)?;
    let last = table.rows.last().expect("non-empty table");
    let rows: Vec<Vec<String>> = truncation
        .iter()
        .zip(&last.delta_e)
        .map(|(t, &final_de)| vec![float(t.p), t.n_opt.to_string(), float(t.delta_e), float(final_de)])
        .collect();
    out.write_csv("truncation.csv", &["p", "n_opt", "delta_e_opt", "delta_e_final"], &rows)?;
    print_truncation(&truncation);
    Ok(0)
}

fn print_truncation(points: &[TruncationPoint]) {
    for t in points {
        println!("p = {:.3e}: n_opt = {}, dE = {:.3e} Ha", t.p, t.n_opt, t.delta_e);
    }
}

#[derive(Serialize)]
struct PrefixSusceptibility {
    n: usize,
    /// Noiseless `Delta E` of the prefix.
    residual: f64,
    p_c: PcEstimate,
    report: SusceptibilityReport,
}

fn pc_cells(estimate: &PcEstimate) -> [String; 2] {
    match *estimate {
        PcEstimate::Reachable { p_c } => [float(p_c), "reachable".into()],
        PcEstimate::Unreachable { .. } => [String::new(), "unreachable".into()],
        PcEstimate::NonPositiveChi { .. } => [String::new(), "non_positive_chi".into()],
    }
}

pub fn susceptibility(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    let problem = load_problem(cfg)?;
    let circuits = prepare_circuits(cfg, &problem)?;
    let mut entries = Vec::new();
    for prefix in &circuits.prefixes {
        let report = noise_susceptibility(
            &prefix.ansatz,
            &prefix.params,
            &problem.hamiltonian,
            &problem.reference,
            cfg.scheme,
        )?;
        let residual = problem.delta_e(report.energy);
        entries.push(PrefixSusceptibility {
            n: prefix.n,
            residual,
            p_c: estimate_pc(&report, residual),
            report,
        });
    }
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let [pc, kind] = pc_cells(&e.p_c);
            vec![
                e.n.to_string(),
                e.report.n_ii.to_string(),
                float(e.report.chi),
                e.report.delta_e.map(float).unwrap_or_default(),
                e.report.delta_e.is_some().to_string(),
                float(e.residual),
                pc,
                kind,
            ]
        })
        .collect();
    out.write_csv(
        "susceptibility.csv",
        &["n", "n_ii", "chi", "delta_e", "delta_e_defined", "residual", "p_c", "p_c_status"],
        &rows,
    )?;
    #[derive(Serialize)]
    struct Payload<'a> {
        problem: &'a str,
        scheme: String,
        prefixes: &'a [PrefixSusceptibility],
    }
    out.write_json(
        "susceptibility.json",
        &Payload {
            problem: &problem.label,
            scheme: cfg.scheme.as_str().to_string(),
            prefixes: &entries,
        },
    )?;
    let last = entries.last().expect("at least one prefix");
    println!(
        "n = {}: chi = {:.6e} Ha, N_II = {}, p_c = {}",
        last.n,
        last.report.chi,
        last.report.n_ii,
        last.p_c.value().map_or("n/a".to_string(), |v| format!("{v:.3e}"))
    );
    Ok(0)
}

/// Positive grid entries, where a crossing is searched for.
fn crossing_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    cfg.p_values.iter().copied().filter(|&p| p > 0.0).collect()
}

#[derive(Serialize)]
struct ZneSummary {
    problem: String,
    n: usize,
    multiplier: f64,
    raw_crossing: Option<Crossing>,
    mitigated_crossing: Option<Crossing>,
    /// Ratio of the mitigated to the raw crossing, when both exist.
    gain: Option<f64>,
}

pub fn zne(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    let problem = load_problem(cfg)?;
    let circuits = prepare_circuits(cfg, &problem)?;
    let c = circuits.last();
    let sim = cfg.sim_options();
    let m = cfg.zne_multiplier;
    let points: Vec<ZnePoint> = zne_sweep(&problem, &c.ansatz, &c.params, &cfg.p_values, cfg.scheme, m, &sim)?;
    let scheme = cfg.scheme.as_str().to_string();
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|z| {
            vec![
                float(z.p),
                float(z.raw),
                float(z.amplified),
                float(z.mitigated),
                float(m),
                scheme.clone(),
            ]
        })
        .collect();
    out.write_csv(
        "zne.csv",
        &["p", "delta_e_raw", "delta_e_amplified", "delta_e_mitigated", "multiplier", "scheme"],
        &rows,
    )?;

    let grid = crossing_grid(cfg);
    let (raw_crossing, mitigated_crossing) = if grid.is_empty() {
        (None, None)
    } else {
        let raw = sweep_crossing(&grid, CHEMICAL_ACCURACY, CROSSING_REL_TOL, |p| {
            noisyvqe::analysis::delta_e_at(&problem, &c.ansatz, &c.params, &NoiseModel::new(p, cfg.scheme), &sim)
        })?;
        let mitigated = sweep_crossing(&grid, CHEMICAL_ACCURACY, CROSSING_REL_TOL, |p| {
            Ok(noisyvqe::analysis::zne_point(&problem, &c.ansatz, &c.params, p, cfg.scheme, m, &sim)?
                .mitigated
                .abs())
        })?;
        (Some(raw), Some(mitigated))
    };
    let gain = match (
        raw_crossing.as_ref().and_then(|c| c.p_c),
        mitigated_crossing.as_ref().and_then(|c| c.p_c),
    ) {
        (Some(r), Some(mi)) if r > 0.0 => Some(mi / r),
        _ => None,
    };
    let summary = ZneSummary {
        problem: problem.label.clone(),
        n: c.n,
        multiplier: m,
        raw_crossing,
        mitigated_crossing,
        gain,
    };
    out.write_json("zne.json", &summary)?;
    match gain {
        Some(g) => println!("ZNE (m = {m}) raises the chemical-accuracy crossing {g:.1}x"),
        None => println!("ZNE (m = {m}): no crossing pair on the grid"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct ScanEntry {
    n: usize,
    n_ii: usize,
    residual: f64,
    chi: f64,
    p_c_linear: PcEstimate,
    crossing: Option<Crossing>,
}

/// For every prefix: the linear `p_c` estimate and the swept crossing.
pub fn truncate_scan(cfg: &ExperimentConfig, out: &OutputDir) -> Result<i32, CliError> {
    let problem = load_problem(cfg)?;
    let circuits = prepare_circuits(cfg, &problem)?;
    let sim = cfg.sim_options();
    let grid = crossing_grid(cfg);
    let mut entries = Vec::new();
    for prefix in &circuits.prefixes {
        let report = noise_susceptibility(
            &prefix.ansatz,
            &prefix.params,
            &problem.hamiltonian,
            &problem.reference,
            cfg.scheme,
        )?;
        let residual = problem.delta_e(report.energy);
        let crossing = if grid.is_empty() || residual >= CHEMICAL_ACCURACY {
            None
        } else {
            Some(sweep_crossing(&grid, CHEMICAL_ACCURACY, CROSSING_REL_TOL, |p| {
                noisyvqe::analysis::delta_e_at(
                    &problem,
                    &prefix.ansatz,
                    &prefix.params,
                    &NoiseModel::new(p, cfg.scheme),
                    &sim,
                )
            })?)
        };
        entries.push(ScanEntry {
            n: prefix.n,
            n_ii: report.n_ii,
            residual,
            chi: report.chi,
            p_c_linear: estimate_pc(&report, residual),
            crossing,
        });
    }
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let [pc, kind] = pc_cells(&e.p_c_linear);
            let swept = e.crossing.as_ref().and_then(|c| c.p_c).map(float).unwrap_or_default();
            vec![
                e.n.to_string(),
                e.n_ii.to_string(),
                float(e.residual),
                float(e.chi),
                pc,
                kind,
                swept,
            ]
        })
        .collect();
    out.write_csv(
        "truncate_scan.csv",
        &["n", "n_ii", "residual", "chi", "p_c_linear", "p_c_linear_status", "p_c_sweep"],
        &rows,
    )?;
    let best = entries
        .iter()
        .filter_map(|e| e.crossing.as_ref().and_then(|c| c.p_c).map(|p| (e.n, p)))
        .fold(None::<(usize, f64)>, |acc, (n, p)| match acc {
            Some((_, q)) if q >= p => acc,
            _ => Some((n, p)),
        });
    #[derive(Serialize)]
    struct Payload<'a> {
        problem: &'a str,
        scheme: String,
        best_n: Option<usize>,
        best_p_c: Option<f64>,
        prefixes: &'a [ScanEntry],
    }
    out.write_json(
        "truncate_scan.json",
        &Payload {
            problem: &problem.label,
            scheme: cfg.scheme.as_str().to_string(),
            best_n: best.map(|b| b.0),
            best_p_c: best.map(|b| b.1),
            prefixes: &entries,
        },
    )?;
    match best {
        Some((n, p)) => println!("best truncation n = {n} with p_c = {p:.3e}"),
        None => println!("no prefix meets chemical accuracy on the grid"),
    }
    Ok(0)
}
