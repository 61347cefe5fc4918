use thiserror::Error;

/// Errors raised by channel construction, decomposition and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:e})")]
    NotCP { min_eigenvalue: f64 },

    #[error("channel is not covariant (cross-sector defect {defect:e} > tol {tol:e})")]
    NotCovariant { defect: f64, tol: f64 },

    #[error("degenerate spectrum: energies {0} and {1} closer than the match tolerance")]
    DegenerateSpectrum(f64, f64),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("mask is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    MaskNotPSD { min_eigenvalue: f64 },

    #[error("mask diagonal entry {index} is {value}, expected 1")]
    DiagonalNotUnit { index: usize, value: f64 },

    #[error("no sector with energy shift {0}")]
    UnknownSector(f64),

    #[error("reliable timing fails: orthogonality defect {defect:e} > tol {tol:e}")]
    NotReliableTiming { defect: f64, tol: f64 },

    #[error("dynamics not periodic with period s*N: phase spread {phase_defect:e}")]
    NotPeriodic { phase_defect: f64 },

    #[error("sector {sigma} out of range for dimension {dim}")]
    SectorOutOfRange { sigma: i64, dim: usize },

    #[error("quadrature under-resolved: {points} nodes cannot integrate degree {degree}")]
    QuadratureUnderResolved { points: usize, degree: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
