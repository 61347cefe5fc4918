//! Truncated single-mode Gaussian displacement channel: displacement
//! operators, their Laguerre sector amplitudes, dephasing masks by
//! quadrature and a Monte Carlo oracle.

pub mod displacement;
pub mod gaussian;
pub mod laguerre;
pub mod montecarlo;
pub mod quadrature;

pub use displacement::{
    annihilation, displacement_matrix, displacement_sector, heuristic_safe_level, leakage,
    safe_level, sector_amplitude, truncation_error_bounds, Displacer,
};
pub use gaussian::{gaussian_decomposition, gaussian_mask, FockParams, GaussianDecomposition};
pub use laguerre::laguerre;
pub use montecarlo::{
    compare_decomposition_to_mc, monte_carlo_channel, ComparisonReport, MonteCarloEstimate,
};
pub use quadrature::GaussLaguerre;
