//! Noise susceptibility, sweeps, truncation, scaling fits and ZNE.

pub mod scaling;
pub mod susceptibility;
pub mod sweep;
pub mod zne;

pub use scaling::{density_slope, pc_scaling_fit, ScalingFit};
pub use susceptibility::{estimate_pc, noise_susceptibility, Fluctuation, PcEstimate, SusceptibilityReport};
pub use sweep::{
    delta_e_at, log_grid, optimal_truncation, sweep_crossing, sweep_noise, validate_grid, Crossing,
    SweepRow, SweepTable, TruncationPoint,
};
pub use zne::{zne_linear, zne_point, zne_sweep, ZnePoint, DEFAULT_ZNE_MULTIPLIER};
