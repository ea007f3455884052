//! ADAPT growth loop.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::optimizer::{minimize, OptimizeOutcome, OptimizerKind, OptimizerSettings};
use crate::ansatz::{Ansatz, AnsatzElement, Pool, PoolKind};
use crate::error::{Error, Result};
use crate::operators::QubitOperator;
use crate::problem::MolecularProblem;
use crate::sim::{
    apply_element_noisy, cnot_count, run_circuit_with, NoiseModel, Occupation, QuantumState,
    SimOptions,
};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

/// Largest pool gradient below which growth is considered stuck.
pub const STALL_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    Gradient,
    Energy,
}

impl std::str::FromStr for DecisionRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gradient" => Ok(Self::Gradient),
            "energy" => Ok(Self::Energy),
            other => Err(Error::InvalidArgument(format!("unknown decision rule {other:?}"))),
        }
    }
}

/// How pool gradients are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    /// `Tr([H, T] rho)`.
    Commutator,
    /// Central difference of `E(theta)` at `theta = 0` with the new element
    /// appended under the growth noise model.
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    pub pool: PoolKind,
    pub rule: DecisionRule,
    pub subpool_size: usize,
    pub optimizer: OptimizerKind,
    /// Gradient-norm cutoff for parameter optimization.
    pub eps_o: f64,
    /// Halt when `E_{n-1} - E_n <= eps`.
    pub eps: f64,
    /// Halt noiseless growth once `E_n - E_FCI < eps_t`.
    pub eps_t: Option<f64>,
    pub max_iterations: usize,
    pub max_optimizer_iterations: Option<usize>,
    pub fd_step: f64,
    /// Noise during growth and optimization (`p = 0` for noiseless growth).
    pub noise: NoiseModel,
    /// `None` picks the commutator when noiseless, finite differences otherwise.
    pub gradient_method: Option<GradientMethod>,
    pub sim: SimOptions,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            pool: PoolKind::Qeb,
            rule: DecisionRule::Gradient,
            subpool_size: 10,
            optimizer: OptimizerKind::Bfgs,
            eps_o: 1e-6,
            eps: 1e-12,
            eps_t: None,
            max_iterations: 30,
            max_optimizer_iterations: None,
            fd_step: 1e-4,
            noise: NoiseModel::noiseless(),
            gradient_method: None,
            sim: SimOptions::default(),
        }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        positive("eps_o", self.eps_o)?;
        positive("eps", self.eps)?;
        positive("fd_step", self.fd_step)?;
        if let Some(t) = self.eps_t {
            positive("eps_t", t)?;
        }
        if self.subpool_size == 0 {
            return Err(Error::InvalidArgument("subpool_size must be at least 1".into()));
        }
        self.noise.effective_p()?;
        Ok(())
    }

    pub fn optimizer_settings(&self) -> OptimizerSettings {
        let mut s = OptimizerSettings::with_kind(self.optimizer);
        s.gradient_tolerance = self.eps_o;
        s.fd_step = self.fd_step;
        if let Some(cap) = self.max_optimizer_iterations {
            s.max_iterations = cap;
        }
        s
    }

    pub fn gradient_method(&self) -> GradientMethod {
        self.gradient_method.unwrap_or(if self.noise.is_noiseless() {
            GradientMethod::Commutator
        } else {
            GradientMethod::FiniteDifference
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptStatus {
    /// All pool gradients vanished with the energy within chemical accuracy.
    Converged,
    HaltedByEpsilon,
    ReachedEpsilonT,
    MaxIterations,
    /// All pool gradients vanished short of chemical accuracy.
    Stalled,
}

impl AdaptStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AdaptStatus::Converged => "converged",
            AdaptStatus::HaltedByEpsilon => "halted_by_epsilon",
            AdaptStatus::ReachedEpsilonT => "reached_epsilon_t",
            AdaptStatus::MaxIterations => "max_iterations",
            AdaptStatus::Stalled => "stalled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptIteration {
    /// Ansatz length after this iteration.
    pub n: usize,
    pub pool_index: usize,
    pub label: String,
    pub params: Vec<f64>,
    pub energy: f64,
    pub delta_e: f64,
    /// Pool gradients on the state before the element was added.
    pub gradients: Vec<f64>,
    pub n_ii: usize,
    pub optimizer_converged: bool,
    pub optimizer_iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdaptRecord {
    pub problem: String,
    pub config: AdaptConfig,
    pub fci_energy: f64,
    /// Reference (`n = 0`) energy under the growth noise model.
    pub reference_energy: f64,
    pub iterations: Vec<AdaptIteration>,
    pub status: AdaptStatus,
    #[serde(skip)]
    pub ansatz: Ansatz,
    #[serde(skip)]
    pub reference: Option<Occupation>,
}

impl AdaptRecord {
    /// `E_0, E_1, ..., E_N`.
    pub fn energies(&self) -> Vec<f64> {
        std::iter::once(self.reference_energy)
            .chain(self.iterations.iter().map(|it| it.energy))
            .collect()
    }

    pub fn final_energy(&self) -> f64 {
        self.iterations.last().map_or(self.reference_energy, |it| it.energy)
    }

    pub fn final_params(&self) -> &[f64] {
        self.iterations.last().map_or(&[], |it| &it.params)
    }

    /// First ansatz length with `E_n - E_FCI` below `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<usize> {
        self.energies()
            .iter()
            .position(|e| e - self.fci_energy < threshold)
    }
}

/// One prefix of a grown ansatz with the parameters optimized at that length.
#[derive(Debug, Clone)]
pub struct Prefix {
    pub n: usize,
    pub ansatz: Ansatz,
    pub params: Vec<f64>,
}

/// Every prefix `n = 0..=N` with its stored parameters.
pub fn truncation_prefixes(record: &AdaptRecord) -> Result<Vec<Prefix>> {
    if record.ansatz.len() != record.iterations.len() {
        return Err(Error::InvalidArgument(format!(
            "record stores {} iterations for an ansatz of length {}",
            record.iterations.len(),
            record.ansatz.len()
        )));
    }
    let mut out = vec![Prefix {
        n: 0,
        ansatz: record.ansatz.prefix(0),
        params: Vec::new(),
    }];
    for it in &record.iterations {
        if it.params.len() != it.n {
            return Err(Error::InvalidArgument(format!(
                "iteration {} stores {} parameters",
                it.n,
                it.params.len()
            )));
        }
        out.push(Prefix {
            n: it.n,
            ansatz: record.ansatz.prefix(it.n),
            params: it.params.clone(),
        });
    }
    Ok(out)
}

/// Commutators `[H, T_a]` for every pool element, computed once per run.
#[derive(Debug, Clone)]
pub struct GradientOperators {
    commutators: Vec<QubitOperator>,
}

impl GradientOperators {
    pub fn new(h: &QubitOperator, pool: &Pool) -> Result<Self> {
        let commutators = pool
            .elements()
            .par_iter()
            .map(|e| h.commutator(e.generator()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { commutators })
    }

    pub fn gradients(&self, state: &QuantumState) -> Result<Vec<f64>> {
        self.commutators
            .par_iter()
            .map(|c| state.expectation(c))
            .collect()
    }
}

/// `Tr([H, T_a] rho)` for every pool element.
pub fn pool_gradients(state: &QuantumState, h: &QubitOperator, pool: &Pool) -> Result<Vec<f64>> {
    GradientOperators::new(h, pool)?.gradients(state)
}

/// Energy after appending `element(theta)` to `state` under `noise`.
pub fn appended_energy(
    state: &QuantumState,
    h: &QubitOperator,
    element: &AnsatzElement,
    theta: f64,
    noise: &NoiseModel,
) -> Result<f64> {
    let p = noise.effective_p()?;
    let mut s = state.clone();
    apply_element_noisy(&mut s, element, theta, noise.scheme, p)?;
    s.check_trace()?;
    s.expectation(h)
}

/// Central-difference pool gradients of the appended energy at `theta = 0`.
pub fn pool_gradients_fd(
    state: &QuantumState,
    h: &QubitOperator,
    pool: &Pool,
    noise: &NoiseModel,
    step: f64,
) -> Result<Vec<f64>> {
    pool.elements()
        .par_iter()
        .map(|e| {
            let up = appended_energy(state, h, e, step, noise)?;
            let down = appended_energy(state, h, e, -step, noise)?;
            Ok((up - down) / (2.0 * step))
        })
        .collect()
}

/// Index of the largest `|g|` (lowest index on ties), or `None` when every
/// component is below the stall threshold.
pub fn select_gradient_rule(gradients: &[f64]) -> Result<Option<usize>> {
    if gradients.is_empty() {
        return Err(Error::InvalidArgument("empty pool".into()));
    }
    let mut best = 0;
    for (i, g) in gradients.iter().enumerate() {
        if g.abs() > gradients[best].abs() {
            best = i;
        }
    }
    Ok((gradients[best].abs() >= STALL_THRESHOLD).then_some(best))
}

/// Pool indices of the `size` largest `|g|`, ties in index order.
pub fn subpool(gradients: &[f64], size: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..gradients.len()).collect();
    idx.sort_by(|&a, &b| gradients[b].abs().total_cmp(&gradients[a].abs()));
    idx.truncate(size.min(gradients.len()));
    idx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySelection {
    pub index: usize,
    pub theta: f64,
    pub energy: f64,
}

/// Screens the subpool by optimizing only the new parameter (earlier ones
/// stay fixed in `state`) and returns the candidate of lowest energy.
#[allow(clippy::too_many_arguments)]
pub fn select_energy_rule(
    state: &QuantumState,
    h: &QubitOperator,
    pool: &Pool,
    gradients: &[f64],
    subpool_size: usize,
    settings: &OptimizerSettings,
    noise: &NoiseModel,
) -> Result<Option<EnergySelection>> {
    if gradients.len() != pool.len() {
        return Err(Error::Dimension(format!(
            "{} gradients for a pool of {}",
            gradients.len(),
            pool.len()
        )));
    }
    if select_gradient_rule(gradients)?.is_none() {
        return Ok(None);
    }
    let candidates = subpool(gradients, subpool_size);
    let screened: Vec<Result<EnergySelection>> = candidates
        .par_iter()
        .map(|&index| {
            let e = &pool.elements()[index];
            let mut f = |x: &[f64]| appended_energy(state, h, e, x[0], noise);
            let out = minimize(&mut f, &[0.0], settings)?;
            Ok(EnergySelection {
                index,
                theta: out.x[0],
                energy: out.value,
            })
        })
        .collect();
    let mut best: Option<EnergySelection> = None;
    let mut first_error = None;
    for r in screened {
        match r {
            Ok(c) => {
                let better = match best {
                    None => true,
                    Some(b) => c.energy < b.energy || (c.energy == b.energy && c.index < b.index),
                };
                if better {
                    best = Some(c);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match (best, first_error) {
        (Some(b), _) => Ok(Some(b)),
        (None, Some(e)) => Err(e),
        (None, None) => Ok(None),
    }
}

/// Energy of the ansatz on `reference` under `noise`.
pub fn ansatz_energy(
    ansatz: &Ansatz,
    params: &[f64],
    h: &QubitOperator,
    reference: &Occupation,
    noise: &NoiseModel,
    sim: &SimOptions,
) -> Result<f64> {
    run_circuit_with(reference, ansatz, params, noise, sim)?.expectation(h)
}

/// Minimizes the ansatz energy from `params0`.
pub fn optimize_parameters(
    ansatz: &Ansatz,
    params0: &[f64],
    h: &QubitOperator,
    reference: &Occupation,
    noise: &NoiseModel,
    settings: &OptimizerSettings,
    sim: &SimOptions,
) -> Result<OptimizeOutcome> {
    ansatz.check_params(params0)?;
    let mut f = |x: &[f64]| ansatz_energy(ansatz, x, h, reference, noise, sim);
    minimize(&mut f, params0, settings)
}

/// Runs ADAPT growth on `problem`.
pub fn adapt_run(problem: &MolecularProblem, config: &AdaptConfig) -> Result<AdaptRecord> {
    config.validate()?;
    let pool = Pool::build(config.pool, problem.n_qubits, problem.n_electrons)?;
    adapt_run_with_pool(problem, &pool, config)
}

pub fn adapt_run_with_pool(
    problem: &MolecularProblem,
    pool: &Pool,
    config: &AdaptConfig,
) -> Result<AdaptRecord> {
    config.validate()?;
    if pool.n_qubits() != problem.n_qubits {
        return Err(Error::Dimension(format!(
            "{}-qubit pool for a {}-qubit problem",
            pool.n_qubits(),
            problem.n_qubits
        )));
    }
    let h = &problem.hamiltonian;
    let reference = problem.reference;
    let noise = config.noise;
    let settings = config.optimizer_settings();
    let method = config.gradient_method();
    let commutators = match method {
        GradientMethod::Commutator => Some(GradientOperators::new(h, pool)?),
        GradientMethod::FiniteDifference => None,
    };

    let mut ansatz = Ansatz::new(problem.n_qubits);
    let mut params: Vec<f64> = Vec::new();
    let reference_energy = ansatz_energy(&ansatz, &params, h, &reference, &noise, &config.sim)?;
    let mut energy = reference_energy;
    let mut iterations = Vec::new();
    let mut status = AdaptStatus::MaxIterations;

    for iter in 1..=config.max_iterations {
        let step = |e: Error| e.context(format!("ADAPT iteration {iter}"));
        let state = run_circuit_with(&reference, &ansatz, &params, &noise, &config.sim).map_err(step)?;
        let gradients = match &commutators {
            Some(c) => c.gradients(&state),
            None => pool_gradients_fd(&state, h, pool, &noise, config.fd_step),
        }
        .map_err(step)?;
        let choice = match config.rule {
            DecisionRule::Gradient => select_gradient_rule(&gradients).map_err(step)?,
            DecisionRule::Energy => select_energy_rule(
                &state,
                h,
                pool,
                &gradients,
                config.subpool_size,
                &settings,
                &noise,
            )
            .map_err(step)?
            .map(|s| s.index),
        };
        let Some(index) = choice else {
            status = if problem.delta_e(energy) < CHEMICAL_ACCURACY {
                AdaptStatus::Converged
            } else {
                AdaptStatus::Stalled
            };
            break;
        };
        let element = pool.elements()[index].clone();
        let label = element.label().to_string();
        ansatz.push(element).map_err(step)?;
        params.push(0.0);
        let out = optimize_parameters(&ansatz, &params, h, &reference, &noise, &settings, &config.sim)
            .map_err(step)?;
        let previous = energy;
        params = out.x;
        energy = out.value;
        iterations.push(AdaptIteration {
            n: ansatz.len(),
            pool_index: index,
            label,
            params: params.clone(),
            energy,
            delta_e: problem.delta_e(energy),
            gradients,
            n_ii: cnot_count(&ansatz),
            optimizer_converged: out.converged,
            optimizer_iterations: out.iterations,
        });
        if previous - energy <= config.eps {
            status = AdaptStatus::HaltedByEpsilon;
            break;
        }
        if let Some(eps_t) = config.eps_t {
            if noise.is_noiseless() && problem.delta_e(energy) < eps_t {
                status = AdaptStatus::ReachedEpsilonT;
                break;
            }
        }
    }

    Ok(AdaptRecord {
        problem: problem.label.clone(),
        config: config.clone(),
        fci_energy: problem.fci_energy,
        reference_energy,
        iterations,
        status,
        ansatz,
        reference: Some(reference),
    })
}
