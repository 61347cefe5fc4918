//! Time covariance: spectra, partial shifts, the canonical sector
//! decomposition, energy-shift distributions and the characteristic
//! function of a covariant channel.

pub mod characteristic;
pub mod decomposition;
pub mod spectrum;

pub use characteristic::{
    bochner_check, characteristic_fourier, characteristic_function, domain_extension_check,
};
pub use decomposition::{
    apply_sector, decompose, reconstruct, sector_channel, shift_distribution,
    EnergyShiftDistribution, PartialShift, Sector, SectorDecomposition, SectorMask,
};
pub use spectrum::{
    covariance_defect, energy_differences, evolve, evolve_operator, project_to_covariant, Spectrum,
};
