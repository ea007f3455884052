//! ADAPT-VQE growth and parameter optimization.

pub mod engine;
pub mod optimizer;

pub use engine::{
    adapt_run, adapt_run_with_pool, ansatz_energy, appended_energy, optimize_parameters,
    pool_gradients, pool_gradients_fd, select_energy_rule, select_gradient_rule, subpool,
    truncation_prefixes, AdaptConfig, AdaptIteration, AdaptRecord, AdaptStatus, DecisionRule,
    EnergySelection, GradientMethod, GradientOperators, Prefix, CHEMICAL_ACCURACY,
    STALL_THRESHOLD,
};
pub use optimizer::{
    finite_difference_gradient, minimize, OptimizeOutcome, OptimizerKind, OptimizerSettings,
};
